// Copyright 2026 The palo-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Chat-completion backends used for translation and judging.
//
// Every backend maps a list of (role, content) messages to one text reply.
// Implementations must be safe to call from several worker threads at once.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "palo_forge/json.h"
#include "palo_forge/rate_limiter.h"
#include "palo_forge/retry.h"

namespace palo_forge {

struct ChatMessage {
  std::string role;
  std::string content;

  friend bool operator==(ChatMessage const&, ChatMessage const&) = default;
};

enum class BackendKind { kTranslator, kJudge };

inline constexpr std::string_view kDefaultCredentialsEnv = "PALO_FORGE_API_KEY";

/// One configured backend. `endpoint` is an http(s) chat-completions URL,
/// "mock", or "cassette:<path>" for replaying recorded traffic.
struct BackendDescriptor {
  std::string backend_id;
  BackendKind kind = BackendKind::kTranslator;
  std::string endpoint;
  std::string model;
  /// Env var holding the API key. Empty means PALO_FORGE_API_KEY_<ID>,
  /// then PALO_FORGE_API_KEY.
  std::string credentials_env;
  double rate_limit_rpm = 60.0;
  std::chrono::milliseconds timeout{60'000};

  bool is_remote() const;
};

/// Parses {"backends": [...]} (or a bare array). Throws ConfigError on
/// duplicate ids or non-positive rate limits.
std::vector<BackendDescriptor> parse_backend_config(std::string_view document);
std::vector<BackendDescriptor> load_backend_config(
    std::filesystem::path const& path);

class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string const& id() const = 0;
  virtual std::string complete(std::span<ChatMessage const> messages) = 0;
};

/// Deterministic, offline backend.
///
/// Translator: replies "[<lang>] " + the last user message, where <lang> is
/// read from the "Target language code: xx" line of the system prompt.
/// Judge: replies with a fixed verdict line ("Score-A: 8 Score-B: 8" unless
/// set otherwise).
class MockBackend : public Backend {
 public:
  static constexpr std::string_view kDefaultVerdict = "Score-A: 8 Score-B: 8";

  explicit MockBackend(BackendKind kind, std::string id = "mock");

  std::string const& id() const override { return id_; }
  std::string complete(std::span<ChatMessage const> messages) override;

  void set_verdict(std::string verdict);
  std::int64_t calls() const { return calls_.load(); }

 private:
  BackendKind kind_;
  std::string id_;
  std::mutex mu_;
  std::string verdict_;
  std::atomic<std::int64_t> calls_{0};
};

/// Backend whose replies come from a test-supplied function.
class ScriptedBackend : public Backend {
 public:
  using Responder = std::function<std::string(std::span<ChatMessage const>)>;

  ScriptedBackend(std::string id, Responder responder);

  /// Replies with `responses` in call order, repeating the last one.
  static std::unique_ptr<ScriptedBackend> sequence(
      std::string id, std::vector<std::string> responses);

  std::string const& id() const override { return id_; }
  std::string complete(std::span<ChatMessage const> messages) override;
  std::int64_t calls() const { return calls_.load(); }

 private:
  std::string id_;
  Responder responder_;
  std::atomic<std::int64_t> calls_{0};
};

/// Talks to a chat-completions style HTTP endpoint:
///   POST <endpoint> {"model": ..., "messages": [...], "temperature": 0}
///   -> {"choices": [{"message": {"content": "..."}}]}
class ChatCompletionsBackend : public Backend {
 public:
  /// Resolves credentials eagerly; throws ConfigError when the key env var
  /// is unset, before any network traffic.
  ChatCompletionsBackend(BackendDescriptor descriptor,
                         Clock& clock = SystemClock::instance());
  ~ChatCompletionsBackend() override;

  std::string const& id() const override { return descriptor_.backend_id; }
  std::string complete(std::span<ChatMessage const> messages) override;

 private:
  BackendDescriptor descriptor_;
  std::string api_key_;
  std::string scheme_host_port_;
  std::string path_;
  RateLimiter limiter_;
};

/// Stable digest of a request, used as the cassette key.
std::string request_hash(std::string_view model,
                         std::span<ChatMessage const> messages);

/// Replays recorded responses from a JSON Lines cassette of
/// {"request_hash": ..., "response": ...}; or, when given an inner backend,
/// forwards misses to it and appends them to the cassette.
class CassetteBackend : public Backend {
 public:
  /// Replay-only.
  CassetteBackend(std::string id, std::string model,
                  std::filesystem::path cassette);
  /// Record mode: misses go to `inner` and are appended to the file.
  CassetteBackend(std::string model, std::filesystem::path cassette,
                  std::unique_ptr<Backend> inner);

  std::string const& id() const override { return id_; }
  std::string complete(std::span<ChatMessage const> messages) override;

 private:
  void load();

  std::string id_;
  std::string model_;
  std::filesystem::path path_;
  std::unique_ptr<Backend> inner_;
  std::mutex mu_;
  std::map<std::string, std::string> entries_;
};

/// Adds bounded exponential backoff around another backend.
class RetryingBackend : public Backend {
 public:
  RetryingBackend(Backend& inner, RetryPolicy policy,
                  Clock& clock = SystemClock::instance());

  std::string const& id() const override { return inner_.id(); }
  std::string complete(std::span<ChatMessage const> messages) override;

 private:
  Backend& inner_;
  RetryPolicy policy_;
  Clock& clock_;
};

std::unique_ptr<Backend> make_backend(BackendDescriptor const& descriptor,
                                      Clock& clock = SystemClock::instance());

}  // namespace palo_forge
