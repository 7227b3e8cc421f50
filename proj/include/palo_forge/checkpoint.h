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

#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>

#include "palo_forge/dataset.h"
#include "palo_forge/translation.h"

namespace palo_forge {

/// Content hash identifying the dataset a checkpoint belongs to.
std::string dataset_fingerprint(std::span<InstructionRecord const> records);

/// Resumable state of a mass translation run: which (record, language)
/// pairs finished and every raw backend reply received so far.
///
/// File layout (JSON, rewritten atomically):
///   {"version": 1, "fingerprint": "...",
///    "completed": [{"record_id": ..., "lang": ...}, ...],
///    "cache": [{"backend_id", "lang", "source_text", "context_digest",
///               "output"}, ...]}
class Checkpoint : public TranslationCache {
 public:
  explicit Checkpoint(std::string fingerprint);

  /// Loads `path` if it exists, else starts empty. Throws ConflictError if
  /// the stored fingerprint differs from `fingerprint`.
  static Checkpoint open(std::filesystem::path const& path,
                         std::string const& fingerprint);

  std::string const& fingerprint() const { return fingerprint_; }

  std::optional<std::string> lookup(CacheKey const& key) const override;
  void store(CacheKey const& key, std::string const& output) override;

  void mark_completed(std::string const& record_id, Language lang);
  bool is_completed(std::string const& record_id, Language lang) const;
  std::size_t completed_count() const;
  std::size_t cache_size() const;

  std::string to_document() const;
  static Checkpoint from_document(std::string_view document);

  /// Atomic replace; safe to call from any thread.
  void save(std::filesystem::path const& path) const;

  Checkpoint(Checkpoint&& other) noexcept;

 private:
  std::string fingerprint_;
  mutable std::mutex mu_;
  mutable std::mutex save_mu_;
  std::set<std::pair<std::string, Language>> completed_;
  std::map<CacheKey, std::string> cache_;
};

}  // namespace palo_forge
