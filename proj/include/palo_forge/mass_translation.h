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

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "palo_forge/dataset.h"
#include "palo_forge/json.h"
#include "palo_forge/llm_backend.h"
#include "palo_forge/translation.h"

namespace palo_forge {

struct MassTranslationOptions {
  int parallelism = 1;
  /// Empty disables checkpointing.
  std::filesystem::path checkpoint_path;
  /// Flush the checkpoint after this many finished (record, language) pairs.
  int checkpoint_every = 25;
  TranslationOptions translation;
  /// Polled between work items; when set, workers drain, the checkpoint is
  /// flushed and the run returns with `interrupted` set.
  std::atomic<bool> const* stop = nullptr;
};

struct LanguageSummary {
  std::int64_t translated = 0;
  /// Translated records with at least one flagged unit.
  std::int64_t flagged = 0;
  std::int64_t failed = 0;
};

struct MassTranslationResult {
  std::vector<Language> languages;
  /// Complete records per language, in input order.
  std::map<Language, std::vector<InstructionRecord>> datasets;
  /// Units of complete records, by language then record then turn.
  std::vector<TranslationUnit> units;
  std::vector<UnitFailure> failures;
  std::map<Language, LanguageSummary> summary;
  std::int64_t backend_calls = 0;
  std::int64_t cache_hits = 0;
  /// (record, language) pairs already finished in the loaded checkpoint.
  std::int64_t resumed = 0;
  bool interrupted = false;
};

Json summary_to_json(MassTranslationResult const& result);

/// Translates every record into every language with a bounded worker pool.
/// Output order never depends on parallelism or completion order. Throws
/// ConflictError if the checkpoint belongs to another dataset. Exceptions
/// other than BackendError abort the run without a final checkpoint flush,
/// as a crash would.
MassTranslationResult run_mass_translation(
    std::span<InstructionRecord const> records,
    std::span<Language const> languages, Backend& backend,
    MassTranslationOptions const& options = {});

}  // namespace palo_forge
