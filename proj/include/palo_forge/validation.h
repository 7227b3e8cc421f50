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

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "palo_forge/json.h"
#include "palo_forge/language.h"
#include "palo_forge/script.h"

namespace palo_forge {

enum class Flag {
  kPlaceholderMismatch,
  kEmptyTranslation,
  kExcessLatin,
  kScriptMismatch,
  kLengthAnomaly,
};

std::string_view flag_name(Flag flag);
std::optional<Flag> parse_flag(std::string_view name);

/// A code point span in the translation supporting one flag.
struct Evidence {
  Flag flag;
  Span span;

  friend bool operator==(Evidence const&, Evidence const&) = default;
};

struct ValidationReport {
  std::set<Flag> flags;
  /// Latin-script letters over all letters; 0 when there are no letters.
  double latin_ratio = 0.0;
  std::vector<Evidence> detail;

  bool has(Flag f) const { return flags.count(f) != 0; }
  bool clean() const { return flags.empty(); }

  friend bool operator==(ValidationReport const&,
                         ValidationReport const&) = default;
};

struct ValidationThresholds {
  /// ExcessLatin above this ratio, for targets that do not use Latin script.
  double max_latin_ratio = 0.30;
  /// ScriptMismatch below this fraction of letters in expected scripts.
  double min_expected_script_ratio = 0.50;
  /// LengthAnomaly outside [min, max] translation/source code point ratio.
  double min_length_ratio = 0.3;
  double max_length_ratio = 3.0;
};

ValidationReport validate_translation(
    std::string_view source, std::string_view translation, Language lang,
    ValidationThresholds const& thresholds = {});

Json report_to_json(ValidationReport const& report);
ValidationReport report_from_json(Json const& j);

}  // namespace palo_forge
