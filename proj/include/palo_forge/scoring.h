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

// Relative scores and the per-language score tables.
//
// All arithmetic is exact: a one-decimal score is held as an integer number
// of tenths, means keep their exact rational value, and rounding to one
// decimal happens once, half away from zero.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "palo_forge/json.h"
#include "palo_forge/language.h"

namespace palo_forge {

/// A one-decimal score in tenths: 67.9 is 679.
using Tenths = std::int64_t;

/// num/den rounded to the nearest integer, ties away from zero. den > 0.
std::int64_t round_half_away(std::int64_t num, std::int64_t den);

/// "67.9", "-3.7", "50"; at most one decimal. Throws ParseError otherwise.
Tenths parse_tenths(std::string_view text);
/// Accepts a JSON number or string holding at most one decimal.
Tenths tenths_from_json(Json const& j);
/// "67.9"; with `signed_plus`, positive values get a leading "+".
std::string format_tenths(Tenths value, bool signed_plus = false);
Json tenths_to_json(Tenths value);

struct JudgeVerdict {
  int reference_score = 0;
  int candidate_score = 0;
  std::string rationale;

  friend bool operator==(JudgeVerdict const&, JudgeVerdict const&) = default;
};

/// 100 * sum(candidate) / sum(reference), to one decimal. Throws UsageError
/// on an empty list and ValidationError on scores outside [1, 10].
Tenths score_language(std::span<JudgeVerdict const> verdicts);

/// One model's row: ten cells plus exact aggregates.
struct ScoreRow {
  std::string model_id;
  std::array<Tenths, kLanguageCount> cells{};

  Tenths cell(Language lang) const { return cells[index_of(lang)]; }
  /// Exact sums of cells (in tenths) over each language group.
  std::int64_t sum_high() const;
  std::int64_t sum_low() const;
  std::int64_t sum_all() const;
  Tenths avg_high() const;
  Tenths avg_low() const;
  Tenths avg_all() const;
};

/// Throws UsageError unless all ten languages are present.
ScoreRow aggregate_table(std::map<Language, Tenths> const& scores,
                         std::string model_id);

/// Per-language differences, and aggregate differences taken between the
/// exact means before rounding.
struct DeltaRow {
  std::string model_id;
  std::string baseline_id;
  std::array<Tenths, kLanguageCount> cells{};
  Tenths avg_high = 0;
  Tenths avg_low = 0;
  Tenths avg_all = 0;
};

DeltaRow delta_rows(ScoreRow const& baseline, ScoreRow const& model);

struct ScoreTable {
  std::vector<ScoreRow> rows;
  /// Each delta is printed directly after its model row.
  std::vector<DeltaRow> deltas;
};

/// Layout of the published table: languages as columns, then Avg.H, Avg.L,
/// Avg.; delta rows follow their model.
std::string render_score_table(ScoreTable const& table);
std::string score_table_csv(ScoreTable const& table);
Json score_table_to_json(ScoreTable const& table);

/// Reads {"model_id", "scores": {"en": 67.9, ...}} or
/// {"rows": [...], "deltas": [{"baseline": id, "model": id}, ...]}.
ScoreTable score_table_from_json(Json const& doc);

struct AblationRow {
  std::string config;
  /// Language the config was fine-tuned on; its column is the diagonal.
  std::optional<Language> diagonal;
  std::array<Tenths, kLanguageCount> cells{};

  std::int64_t sum() const;
  Tenths avg() const;
};

struct AblationInput {
  std::string config;
  std::optional<Language> diagonal;
  std::map<Language, Tenths> scores;
};

/// Throws UsageError if a row misses a language.
std::vector<AblationRow> ablation_matrix(std::span<AblationInput const> runs);

/// Guesses the fine-tuning language from a config name such as
/// "150K-Bengali"; none when no language name (other than a bare
/// multi-language config) appears.
std::optional<Language> infer_config_language(std::string_view config);

/// Diagonal cells are wrapped in brackets.
std::string render_ablation(std::span<AblationRow const> rows);
Json ablation_to_json(std::span<AblationRow const> rows);

/// Reads {"runs": [{"config", "lang"?, "scores": {...}}, ...]}.
std::vector<AblationInput> ablation_inputs_from_json(Json const& doc);

}  // namespace palo_forge
