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

// Instruction datasets in the LLaVA-Instruct layout:
//
//   [{"id": "...", "image": "coco/000001.jpg",
//     "conversations": [{"from": "human", "value": "<image>\nWhat ..."},
//                       {"from": "gpt", "value": "..."}]}, ...]
//
// "image" is optional (text-only records). Keys other than these three are
// ignored on input.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "palo_forge/language.h"

namespace palo_forge {

inline constexpr std::string_view kImagePlaceholder = "<image>";

/// Non-overlapping occurrences of the image placeholder token.
std::size_t count_placeholders(std::string_view text);

enum class Speaker { kHuman, kAssistant };

struct Turn {
  Speaker speaker = Speaker::kHuman;
  std::string text;

  friend bool operator==(Turn const&, Turn const&) = default;
};

struct InstructionRecord {
  std::string id;
  std::optional<std::string> image;
  std::vector<Turn> turns;

  std::size_t placeholder_count() const;

  friend bool operator==(InstructionRecord const&,
                         InstructionRecord const&) = default;
};

/// One broken invariant. `rule` is a short stable phrase such as
/// "placeholder in assistant turn".
struct Violation {
  std::string record_id;
  std::string rule;
};

/// Checks the record invariants: non-empty turns alternating from human; at
/// most one placeholder, only in human turns, present iff an image is set.
std::vector<Violation> check_record(InstructionRecord const& record);

struct ParseOptions {
  /// Downgrade invariant violations to warnings instead of throwing.
  bool lenient = false;
};

struct ParsedDataset {
  std::vector<InstructionRecord> records;
  /// Populated in lenient mode; empty otherwise (strict mode throws).
  std::vector<Violation> warnings;
};

/// Throws ParseError (with byte offset) for malformed JSON and
/// ValidationError for schema problems, or for invariant violations when
/// not lenient.
ParsedDataset parse_instruct_dataset(std::string_view document,
                                     ParseOptions const& options = {});

struct SerializeOptions {
  /// Skip the invariant check (used for machine output that may carry
  /// flagged records).
  bool lenient = false;
};

/// Byte-stable: identical input always yields identical bytes.
std::string serialize_instruct_dataset(
    std::span<InstructionRecord const> records,
    SerializeOptions const& options = {});

/// Record counts per language for a multilingual training mix.
struct MixPlan {
  std::vector<std::pair<Language, std::int64_t>> counts;
  std::int64_t total = 0;

  std::int64_t count_for(Language lang) const;
};

/// English contributes `english_count`; each listed language contributes
/// `translated_count` unless `overrides` names a different bucket size.
MixPlan plan_dataset_mix(std::int64_t english_count,
                         std::int64_t translated_count,
                         std::span<Language const> languages,
                         std::map<Language, std::int64_t> const& overrides = {});

}  // namespace palo_forge
