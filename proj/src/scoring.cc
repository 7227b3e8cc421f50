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

#include "palo_forge/scoring.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "palo_forge/errors.h"

namespace palo_forge {
namespace {

constexpr std::int64_t kHighCount = 6;
constexpr std::int64_t kLowCount = 4;
constexpr std::int64_t kAllCount = 10;

std::int64_t sum_where(std::array<Tenths, kLanguageCount> const& cells,
                       std::optional<ResourceClass> cls) {
  std::int64_t s = 0;
  for (auto const& tag : all_language_tags()) {
    if (!cls || tag.resource_class == *cls) s += cells[index_of(tag.id)];
  }
  return s;
}

std::array<Tenths, kLanguageCount> cells_from(
    std::map<Language, Tenths> const& scores, std::string const& who) {
  std::array<Tenths, kLanguageCount> cells{};
  for (auto lang : all_languages()) {
    auto it = scores.find(lang);
    if (it == scores.end()) {
      throw UsageError("'" + who + "' has no score for " +
                       std::string(code_of(lang)));
    }
    cells[index_of(lang)] = it->second;
  }
  return cells;
}

std::map<Language, Tenths> scores_from_json(Json const& j) {
  if (!j.is_object()) throw UsageError("'scores' must be an object");
  std::map<Language, Tenths> out;
  for (auto const& [code, value] : j.items()) {
    out[language_from_code(code)] = tenths_from_json(value);
  }
  return out;
}

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

// Code points, which is the column width for the labels used here.
std::size_t display_width(std::string const& s) {
  std::size_t w = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++w;
  }
  return w;
}

std::string pad_right_display(std::string s, std::size_t width) {
  auto w = display_width(s);
  if (w < width) s.append(width - w, ' ');
  return s;
}

std::vector<std::string> header_labels() {
  std::vector<std::string> out;
  for (auto const& tag : all_language_tags()) out.emplace_back(tag.column_label);
  out.emplace_back("Avg.H");
  out.emplace_back("Avg.L");
  out.emplace_back("Avg.");
  return out;
}

std::string render_lines(std::vector<std::vector<std::string>> const& rows) {
  std::vector<std::size_t> widths;
  for (auto const& row : rows) {
    if (widths.size() < row.size()) widths.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], display_width(row[i]));
    }
  }
  std::string out;
  for (auto const& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) {
        line += pad_right_display(row[i], widths[i]);
      } else {
        line += "  " + pad_left(row[i], widths[i]);
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string csv_field(std::string const& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::int64_t round_half_away(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw UsageError("denominator must be positive");
  std::int64_t q = num / den;
  std::int64_t r = num % den;
  if (2 * std::abs(r) >= den) q += num < 0 ? -1 : 1;
  return q;
}

Tenths parse_tenths(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto dot = s.find('.');
  auto whole = s.substr(0, dot);
  auto frac = dot == std::string_view::npos ? std::string_view() : s.substr(dot + 1);
  auto all_digits = [](std::string_view d) {
    return std::all_of(d.begin(), d.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
  };
  if (whole.empty() || whole.size() > 15 || !all_digits(whole) ||
      frac.size() > 1 || !all_digits(frac) ||
      (dot != std::string_view::npos && frac.empty())) {
    throw ParseError("invalid one-decimal score '" + std::string(text) + "'", 0);
  }
  Tenths v = std::stoll(std::string(whole)) * 10;
  if (!frac.empty()) v += frac[0] - '0';
  return negative ? -v : v;
}

Tenths tenths_from_json(Json const& j) {
  if (j.is_string()) return parse_tenths(j.get<std::string>());
  if (j.is_number_integer()) return j.get<std::int64_t>() * 10;
  if (j.is_number()) {
    double x = j.get<double>() * 10.0;
    double r = std::round(x);
    if (std::fabs(x - r) > 1e-6) {
      throw ParseError("score " + j.dump() + " has more than one decimal", 0);
    }
    return static_cast<Tenths>(r);
  }
  throw ParseError("score must be a number, got " + j.dump(), 0);
}

std::string format_tenths(Tenths value, bool signed_plus) {
  std::string sign;
  if (value < 0) {
    sign = "-";
  } else if (signed_plus && value > 0) {
    sign = "+";
  }
  auto a = std::abs(value);
  return sign + std::to_string(a / 10) + "." + std::to_string(a % 10);
}

Json tenths_to_json(Tenths value) { return static_cast<double>(value) / 10.0; }

Tenths score_language(std::span<JudgeVerdict const> verdicts) {
  if (verdicts.empty()) throw UsageError("no verdicts to score");
  std::int64_t sum_ref = 0, sum_cand = 0;
  for (auto const& v : verdicts) {
    if (v.reference_score < 1 || v.reference_score > 10 ||
        v.candidate_score < 1 || v.candidate_score > 10) {
      throw ValidationError("", "judge score out of range");
    }
    sum_ref += v.reference_score;
    sum_cand += v.candidate_score;
  }
  return round_half_away(1000 * sum_cand, sum_ref);
}

std::int64_t ScoreRow::sum_high() const { return sum_where(cells, ResourceClass::kHigh); }
std::int64_t ScoreRow::sum_low() const { return sum_where(cells, ResourceClass::kLow); }
std::int64_t ScoreRow::sum_all() const { return sum_where(cells, std::nullopt); }
Tenths ScoreRow::avg_high() const { return round_half_away(sum_high(), kHighCount); }
Tenths ScoreRow::avg_low() const { return round_half_away(sum_low(), kLowCount); }
Tenths ScoreRow::avg_all() const { return round_half_away(sum_all(), kAllCount); }

ScoreRow aggregate_table(std::map<Language, Tenths> const& scores,
                         std::string model_id) {
  ScoreRow row;
  row.cells = cells_from(scores, model_id);
  row.model_id = std::move(model_id);
  return row;
}

DeltaRow delta_rows(ScoreRow const& baseline, ScoreRow const& model) {
  DeltaRow d;
  d.model_id = model.model_id;
  d.baseline_id = baseline.model_id;
  for (std::size_t i = 0; i < kLanguageCount; ++i) {
    d.cells[i] = model.cells[i] - baseline.cells[i];
  }
  d.avg_high = round_half_away(model.sum_high() - baseline.sum_high(), kHighCount);
  d.avg_low = round_half_away(model.sum_low() - baseline.sum_low(), kLowCount);
  d.avg_all = round_half_away(model.sum_all() - baseline.sum_all(), kAllCount);
  return d;
}

std::string render_score_table(ScoreTable const& table) {
  std::vector<std::vector<std::string>> lines;
  auto header = header_labels();
  header.insert(header.begin(), "Model");
  lines.push_back(header);
  auto emit_delta = [&](DeltaRow const& d) {
    std::vector<std::string> line{"  delta vs " + d.baseline_id};
    for (auto c : d.cells) line.push_back(format_tenths(c, true));
    line.push_back(format_tenths(d.avg_high, true));
    line.push_back(format_tenths(d.avg_low, true));
    line.push_back(format_tenths(d.avg_all, true));
    lines.push_back(std::move(line));
  };
  for (auto const& row : table.rows) {
    std::vector<std::string> line{row.model_id};
    for (auto c : row.cells) line.push_back(format_tenths(c));
    line.push_back(format_tenths(row.avg_high()));
    line.push_back(format_tenths(row.avg_low()));
    line.push_back(format_tenths(row.avg_all()));
    lines.push_back(std::move(line));
    for (auto const& d : table.deltas) {
      if (d.model_id == row.model_id) emit_delta(d);
    }
  }
  return render_lines(lines);
}

std::string score_table_csv(ScoreTable const& table) {
  std::string out = "row,kind,baseline";
  for (auto const& tag : all_language_tags()) out += "," + std::string(tag.code);
  out += ",avg_high,avg_low,avg\n";
  for (auto const& row : table.rows) {
    out += csv_field(row.model_id) + ",score,";
    for (auto c : row.cells) out += "," + format_tenths(c);
    out += "," + format_tenths(row.avg_high()) + "," + format_tenths(row.avg_low()) +
           "," + format_tenths(row.avg_all()) + "\n";
    for (auto const& d : table.deltas) {
      if (d.model_id != row.model_id) continue;
      out += csv_field(d.model_id) + ",delta," + csv_field(d.baseline_id);
      for (auto c : d.cells) out += "," + format_tenths(c, true);
      out += "," + format_tenths(d.avg_high, true) + "," +
             format_tenths(d.avg_low, true) + "," +
             format_tenths(d.avg_all, true) + "\n";
    }
  }
  return out;
}

Json score_table_to_json(ScoreTable const& table) {
  Json j;
  auto rows = Json::array();
  for (auto const& row : table.rows) {
    Json r;
    r["model_id"] = row.model_id;
    auto scores = Json::object();
    for (auto const& tag : all_language_tags()) {
      scores[std::string(tag.code)] = tenths_to_json(row.cell(tag.id));
    }
    r["scores"] = std::move(scores);
    r["avg_high"] = tenths_to_json(row.avg_high());
    r["avg_low"] = tenths_to_json(row.avg_low());
    r["avg"] = tenths_to_json(row.avg_all());
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  auto deltas = Json::array();
  for (auto const& d : table.deltas) {
    Json r;
    r["model"] = d.model_id;
    r["baseline"] = d.baseline_id;
    auto cells = Json::object();
    for (auto const& tag : all_language_tags()) {
      cells[std::string(tag.code)] = tenths_to_json(d.cells[index_of(tag.id)]);
    }
    r["deltas"] = std::move(cells);
    r["avg_high"] = tenths_to_json(d.avg_high);
    r["avg_low"] = tenths_to_json(d.avg_low);
    r["avg"] = tenths_to_json(d.avg_all);
    deltas.push_back(std::move(r));
  }
  j["deltas"] = std::move(deltas);
  return j;
}

ScoreTable score_table_from_json(Json const& doc) {
  ScoreTable table;
  try {
    if (doc.contains("rows")) {
      for (auto const& r : doc.at("rows")) {
        table.rows.push_back(aggregate_table(scores_from_json(r.at("scores")),
                                             r.at("model_id").get<std::string>()));
      }
    } else {
      table.rows.push_back(aggregate_table(scores_from_json(doc.at("scores")),
                                           doc.at("model_id").get<std::string>()));
    }
    auto find = [&](std::string const& id) -> ScoreRow const& {
      for (auto const& r : table.rows) {
        if (r.model_id == id) return r;
      }
      throw UsageError("delta references unknown row '" + id + "'");
    };
    if (doc.contains("deltas")) {
      for (auto const& d : doc.at("deltas")) {
        table.deltas.push_back(delta_rows(find(d.at("baseline").get<std::string>()),
                                          find(d.at("model").get<std::string>())));
      }
    }
  } catch (Json::exception const& e) {
    throw UsageError(std::string("malformed score document: ") + e.what());
  }
  return table;
}

std::int64_t AblationRow::sum() const {
  return sum_where(cells, std::nullopt);
}

Tenths AblationRow::avg() const { return round_half_away(sum(), kAllCount); }

std::vector<AblationRow> ablation_matrix(std::span<AblationInput const> runs) {
  std::vector<AblationRow> out;
  for (auto const& run : runs) {
    AblationRow row;
    row.config = run.config;
    row.diagonal = run.diagonal;
    row.cells = cells_from(run.scores, run.config);
    out.push_back(std::move(row));
  }
  return out;
}

std::optional<Language> infer_config_language(std::string_view config) {
  std::string lower;
  for (unsigned char c : config) lower.push_back(static_cast<char>(std::tolower(c)));
  std::optional<Language> found;
  for (auto const& tag : all_language_tags()) {
    std::string name;
    for (unsigned char c : tag.name) name.push_back(static_cast<char>(std::tolower(c)));
    if (lower.find(name) != std::string::npos) {
      if (found) return std::nullopt;
      found = tag.id;
    }
  }
  return found;
}

std::string render_ablation(std::span<AblationRow const> rows) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> header{"Config"};
  for (auto const& tag : all_language_tags()) header.emplace_back(tag.column_label);
  header.emplace_back("Avg.");
  lines.push_back(header);
  for (auto const& row : rows) {
    std::vector<std::string> line{row.config};
    for (auto const& tag : all_language_tags()) {
      auto cell = format_tenths(row.cells[index_of(tag.id)]);
      if (row.diagonal == tag.id) cell = "[" + cell + "]";
      line.push_back(cell);
    }
    line.push_back(format_tenths(row.avg()));
    lines.push_back(std::move(line));
  }
  return render_lines(lines);
}

Json ablation_to_json(std::span<AblationRow const> rows) {
  auto out = Json::array();
  for (auto const& row : rows) {
    Json r;
    r["config"] = row.config;
    r["diagonal"] = row.diagonal ? Json(code_of(*row.diagonal)) : Json(nullptr);
    auto scores = Json::object();
    for (auto const& tag : all_language_tags()) {
      scores[std::string(tag.code)] = tenths_to_json(row.cells[index_of(tag.id)]);
    }
    r["scores"] = std::move(scores);
    r["avg"] = tenths_to_json(row.avg());
    out.push_back(std::move(r));
  }
  return Json{{"rows", std::move(out)}};
}

std::vector<AblationInput> ablation_inputs_from_json(Json const& doc) {
  std::vector<AblationInput> out;
  try {
    for (auto const& r : doc.at("runs")) {
      AblationInput in;
      in.config = r.at("config").get<std::string>();
      if (r.contains("lang")) {
        if (!r.at("lang").is_null()) {
          in.diagonal = language_from_code(r.at("lang").get<std::string>());
        }
      } else {
        in.diagonal = infer_config_language(in.config);
      }
      in.scores = scores_from_json(r.at("scores"));
      out.push_back(std::move(in));
    }
  } catch (Json::exception const& e) {
    throw UsageError(std::string("malformed ablation document: ") + e.what());
  }
  return out;
}

}  // namespace palo_forge
