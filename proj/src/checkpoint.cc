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

#include "palo_forge/checkpoint.h"

#include "palo_forge/errors.h"
#include "palo_forge/io.h"
#include "palo_forge/json.h"

namespace palo_forge {

std::string dataset_fingerprint(std::span<InstructionRecord const> records) {
  return sha256_hex(
      serialize_instruct_dataset(records, SerializeOptions{.lenient = true}));
}

Checkpoint::Checkpoint(std::string fingerprint)
    : fingerprint_(std::move(fingerprint)) {}

Checkpoint::Checkpoint(Checkpoint&& other) noexcept {
  std::lock_guard lock(other.mu_);
  fingerprint_ = std::move(other.fingerprint_);
  completed_ = std::move(other.completed_);
  cache_ = std::move(other.cache_);
}

Checkpoint Checkpoint::open(std::filesystem::path const& path,
                            std::string const& fingerprint) {
  if (!std::filesystem::exists(path)) return Checkpoint(fingerprint);
  auto cp = from_document(read_file(path));
  if (cp.fingerprint_ != fingerprint) {
    throw ConflictError("checkpoint '" + path.string() +
                        "' belongs to a different dataset; refusing to resume");
  }
  return cp;
}

std::optional<std::string> Checkpoint::lookup(CacheKey const& key) const {
  std::lock_guard lock(mu_);
  auto it = cache_.find(key);
  if (it == cache_.end()) return std::nullopt;
  return it->second;
}

void Checkpoint::store(CacheKey const& key, std::string const& output) {
  std::lock_guard lock(mu_);
  cache_.emplace(key, output);
}

void Checkpoint::mark_completed(std::string const& record_id, Language lang) {
  std::lock_guard lock(mu_);
  completed_.emplace(record_id, lang);
}

bool Checkpoint::is_completed(std::string const& record_id,
                              Language lang) const {
  std::lock_guard lock(mu_);
  return completed_.count({record_id, lang}) != 0;
}

std::size_t Checkpoint::completed_count() const {
  std::lock_guard lock(mu_);
  return completed_.size();
}

std::size_t Checkpoint::cache_size() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

std::string Checkpoint::to_document() const {
  std::lock_guard lock(mu_);
  Json doc;
  doc["version"] = 1;
  doc["fingerprint"] = fingerprint_;
  auto completed = Json::array();
  for (auto const& [id, lang] : completed_) {
    completed.push_back(Json{{"record_id", id}, {"lang", code_of(lang)}});
  }
  doc["completed"] = std::move(completed);
  auto cache = Json::array();
  for (auto const& [k, v] : cache_) {
    cache.push_back(Json{{"backend_id", k.backend_id},
                         {"lang", code_of(k.lang)},
                         {"source_text", k.source_text},
                         {"context_digest", k.context_digest},
                         {"output", v}});
  }
  doc["cache"] = std::move(cache);
  return doc.dump(1) + "\n";
}

Checkpoint Checkpoint::from_document(std::string_view document) {
  auto doc = parse_json(document, "checkpoint");
  try {
    if (doc.at("version").get<int>() != 1) {
      throw ConfigError("unsupported checkpoint version");
    }
    Checkpoint cp(doc.at("fingerprint").get<std::string>());
    for (auto const& c : doc.at("completed")) {
      cp.completed_.emplace(c.at("record_id").get<std::string>(),
                            language_from_code(c.at("lang").get<std::string>()));
    }
    for (auto const& e : doc.at("cache")) {
      CacheKey k{e.at("backend_id").get<std::string>(),
                 language_from_code(e.at("lang").get<std::string>()),
                 e.at("source_text").get<std::string>(),
                 e.value("context_digest", "")};
      cp.cache_.emplace(std::move(k), e.at("output").get<std::string>());
    }
    return cp;
  } catch (Json::exception const& e) {
    throw ConfigError(std::string("malformed checkpoint: ") + e.what());
  }
}

void Checkpoint::save(std::filesystem::path const& path) const {
  std::lock_guard lock(save_mu_);
  write_file_atomic(path, to_document());
}

}  // namespace palo_forge
