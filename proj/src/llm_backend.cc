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

#include "palo_forge/llm_backend.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>

#include <httplib.h>

#include "palo_forge/errors.h"
#include "palo_forge/io.h"

namespace palo_forge {
namespace {

constexpr std::string_view kTargetMarker = "Target language code: ";

std::string last_user_content(std::span<ChatMessage const> messages) {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->role == "user") return it->content;
  }
  return {};
}

std::string env_or_empty(std::string const& name) {
  char const* v = std::getenv(name.c_str());
  return v ? std::string(v) : std::string();
}

std::string default_env_for(std::string const& backend_id) {
  std::string out = std::string(kDefaultCredentialsEnv) + "_";
  for (char c : backend_id) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c))
                      ? static_cast<char>(
                            std::toupper(static_cast<unsigned char>(c)))
                      : '_');
  }
  return out;
}

BackendKind parse_kind(std::string const& s) {
  if (s == "translator") return BackendKind::kTranslator;
  if (s == "judge") return BackendKind::kJudge;
  throw ConfigError("unknown backend kind '" + s + "'");
}

}  // namespace

bool BackendDescriptor::is_remote() const {
  return endpoint.rfind("http://", 0) == 0 || endpoint.rfind("https://", 0) == 0;
}

std::vector<BackendDescriptor> parse_backend_config(
    std::string_view document) {
  auto doc = parse_json(document, "backend config");
  Json const* list = &doc;
  if (doc.is_object()) {
    auto it = doc.find("backends");
    if (it == doc.end()) throw ConfigError("backend config lacks 'backends'");
    list = &*it;
  }
  if (!list->is_array()) throw ConfigError("'backends' must be an array");

  std::vector<BackendDescriptor> out;
  std::set<std::string> ids;
  try {
    for (auto const& b : *list) {
      BackendDescriptor d;
      d.backend_id = b.at("backend_id").get<std::string>();
      d.kind = parse_kind(b.value("kind", "translator"));
      d.endpoint = b.at("endpoint").get<std::string>();
      d.model = b.value("model", "");
      d.credentials_env = b.value("credentials_env", "");
      d.rate_limit_rpm = b.value("rate_limit_rpm", 60.0);
      d.timeout = std::chrono::milliseconds(b.value("timeout_ms", 60'000));
      if (!(d.rate_limit_rpm > 0)) {
        throw ConfigError("backend '" + d.backend_id +
                          "': rate_limit_rpm must be positive");
      }
      if (!ids.insert(d.backend_id).second) {
        throw ConfigError("duplicate backend_id '" + d.backend_id + "'");
      }
      out.push_back(std::move(d));
    }
  } catch (Json::exception const& e) {
    throw ConfigError(std::string("backend config: ") + e.what());
  }
  return out;
}

std::vector<BackendDescriptor> load_backend_config(
    std::filesystem::path const& path) {
  return parse_backend_config(read_file(path));
}

// --- MockBackend -----------------------------------------------------------

MockBackend::MockBackend(BackendKind kind, std::string id)
    : kind_(kind), id_(std::move(id)), verdict_(kDefaultVerdict) {}

void MockBackend::set_verdict(std::string verdict) {
  std::lock_guard lock(mu_);
  verdict_ = std::move(verdict);
}

std::string MockBackend::complete(std::span<ChatMessage const> messages) {
  ++calls_;
  if (kind_ == BackendKind::kJudge) {
    std::lock_guard lock(mu_);
    return verdict_;
  }
  for (auto const& m : messages) {
    if (m.role != "system") continue;
    auto pos = m.content.find(kTargetMarker);
    if (pos == std::string::npos) continue;
    auto code = m.content.substr(pos + kTargetMarker.size(), 2);
    return "[" + code + "] " + last_user_content(messages);
  }
  throw BackendError(BackendErrorKind::kProtocol,
                     "mock translator: no target language in prompt");
}

// --- ScriptedBackend -------------------------------------------------------

ScriptedBackend::ScriptedBackend(std::string id, Responder responder)
    : id_(std::move(id)), responder_(std::move(responder)) {}

std::unique_ptr<ScriptedBackend> ScriptedBackend::sequence(
    std::string id, std::vector<std::string> responses) {
  if (responses.empty()) throw UsageError("scripted sequence is empty");
  auto state = std::make_shared<std::pair<std::mutex, std::size_t>>();
  auto shared = std::make_shared<std::vector<std::string>>(std::move(responses));
  return std::make_unique<ScriptedBackend>(
      std::move(id), [state, shared](std::span<ChatMessage const>) {
        std::lock_guard lock(state->first);
        auto i = std::min(state->second++, shared->size() - 1);
        return (*shared)[i];
      });
}

std::string ScriptedBackend::complete(std::span<ChatMessage const> messages) {
  ++calls_;
  return responder_(messages);
}

// --- ChatCompletionsBackend ------------------------------------------------

ChatCompletionsBackend::ChatCompletionsBackend(BackendDescriptor descriptor,
                                               Clock& clock)
    : descriptor_(std::move(descriptor)),
      limiter_(descriptor_.rate_limit_rpm, clock) {
  static std::regex const kUrl(R"(^(https?://[^/]+)(/.*)?$)",
                               std::regex::icase);
  std::smatch m;
  if (!std::regex_match(descriptor_.endpoint, m, kUrl)) {
    throw ConfigError("backend '" + descriptor_.backend_id +
                      "': endpoint is not an http(s) URL");
  }
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/v1/chat/completions";

  std::vector<std::string> candidates;
  if (!descriptor_.credentials_env.empty()) {
    candidates.push_back(descriptor_.credentials_env);
  } else {
    candidates.push_back(default_env_for(descriptor_.backend_id));
    candidates.emplace_back(kDefaultCredentialsEnv);
  }
  for (auto const& name : candidates) {
    api_key_ = env_or_empty(name);
    if (!api_key_.empty()) break;
  }
  if (api_key_.empty()) {
    throw ConfigError("backend '" + descriptor_.backend_id +
                      "': no API key (set " + candidates.front() + ")");
  }
}

ChatCompletionsBackend::~ChatCompletionsBackend() = default;

std::string ChatCompletionsBackend::complete(
    std::span<ChatMessage const> messages) {
  limiter_.acquire();

  Json body;
  body["model"] = descriptor_.model;
  auto msgs = Json::array();
  for (auto const& m : messages) {
    msgs.push_back(Json{{"role", m.role}, {"content", m.content}});
  }
  body["messages"] = std::move(msgs);
  body["temperature"] = 0;

  // httplib clients are not shareable across threads; one per call.
  httplib::Client client(scheme_host_port_);
  auto const timeout = descriptor_.timeout;
  client.set_connection_timeout(
      std::chrono::duration_cast<std::chrono::seconds>(timeout).count(),
      static_cast<time_t>((timeout.count() % 1000) * 1000));
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};

  auto started = std::chrono::steady_clock::now();
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    auto elapsed = std::chrono::steady_clock::now() - started;
    auto err = res.error();
    auto msg = "backend '" + id() + "': " + httplib::to_string(err);
    if (err == httplib::Error::ConnectionTimeout || elapsed >= timeout) {
      throw BackendError(BackendErrorKind::kTimeout, msg);
    }
    throw BackendError(BackendErrorKind::kTransport, msg);
  }
  if (res->status == 429) {
    throw BackendError(BackendErrorKind::kRateLimited,
                       "backend '" + id() + "': rate limited", 429);
  }
  if (res->status < 200 || res->status >= 300) {
    throw BackendError(BackendErrorKind::kHttp,
                       "backend '" + id() + "': HTTP " +
                           std::to_string(res->status),
                       res->status);
  }
  try {
    auto reply = Json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (Json::exception const& e) {
    throw BackendError(BackendErrorKind::kProtocol,
                       "backend '" + id() + "': unexpected reply: " + e.what());
  }
}

// --- Cassettes -------------------------------------------------------------

std::string request_hash(std::string_view model,
                         std::span<ChatMessage const> messages) {
  Json req;
  req["model"] = model;
  auto msgs = Json::array();
  for (auto const& m : messages) {
    msgs.push_back(Json{{"role", m.role}, {"content", m.content}});
  }
  req["messages"] = std::move(msgs);
  return sha256_hex(req.dump());
}

CassetteBackend::CassetteBackend(std::string id, std::string model,
                                 std::filesystem::path cassette)
    : id_(std::move(id)), model_(std::move(model)), path_(std::move(cassette)) {
  load();
}

CassetteBackend::CassetteBackend(std::string model,
                                 std::filesystem::path cassette,
                                 std::unique_ptr<Backend> inner)
    : id_(inner->id()),
      model_(std::move(model)),
      path_(std::move(cassette)),
      inner_(std::move(inner)) {
  if (std::filesystem::exists(path_)) load();
}

void CassetteBackend::load() {
  for_each_line(read_file(path_), [&](std::string_view line, std::size_t n) {
    try {
      auto j = Json::parse(line);
      entries_[j.at("request_hash").get<std::string>()] =
          j.at("response").get<std::string>();
    } catch (Json::exception const& e) {
      throw ParseError("cassette line " + std::to_string(n) + ": " + e.what(),
                       0);
    }
  });
}

std::string CassetteBackend::complete(std::span<ChatMessage const> messages) {
  auto key = request_hash(model_, messages);
  {
    std::lock_guard lock(mu_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  if (!inner_) {
    throw BackendError(BackendErrorKind::kProtocol,
                       "cassette miss for request " + key.substr(0, 12));
  }
  auto response = inner_->complete(messages);
  std::lock_guard lock(mu_);
  if (entries_.emplace(key, response).second) {
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << to_jsonl_line(Json{{"request_hash", key}, {"response", response}});
    if (!out) throw Error("cannot append to cassette '" + path_.string() + "'");
  }
  return response;
}

// --- Retrying --------------------------------------------------------------

RetryingBackend::RetryingBackend(Backend& inner, RetryPolicy policy,
                                 Clock& clock)
    : inner_(inner), policy_(policy), clock_(clock) {}

std::string RetryingBackend::complete(std::span<ChatMessage const> messages) {
  return call_with_retries(policy_, clock_,
                           [&] { return inner_.complete(messages); });
}

std::unique_ptr<Backend> make_backend(BackendDescriptor const& descriptor,
                                      Clock& clock) {
  if (descriptor.endpoint == "mock") {
    return std::make_unique<MockBackend>(descriptor.kind, descriptor.backend_id);
  }
  constexpr std::string_view kCassette = "cassette:";
  if (descriptor.endpoint.rfind(kCassette, 0) == 0) {
    return std::make_unique<CassetteBackend>(
        descriptor.backend_id, descriptor.model,
        descriptor.endpoint.substr(kCassette.size()));
  }
  if (descriptor.is_remote()) {
    return std::make_unique<ChatCompletionsBackend>(descriptor, clock);
  }
  throw ConfigError("backend '" + descriptor.backend_id +
                    "': unsupported endpoint '" + descriptor.endpoint + "'");
}

}  // namespace palo_forge
