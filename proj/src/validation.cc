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

#include "palo_forge/validation.h"

#include <array>

#include "palo_forge/dataset.h"
#include "palo_forge/errors.h"

namespace palo_forge {
namespace {

constexpr std::array<std::pair<Flag, std::string_view>, 5> kFlagNames = {{
    {Flag::kPlaceholderMismatch, "PlaceholderMismatch"},
    {Flag::kEmptyTranslation, "EmptyTranslation"},
    {Flag::kExcessLatin, "ExcessLatin"},
    {Flag::kScriptMismatch, "ScriptMismatch"},
    {Flag::kLengthAnomaly, "LengthAnomaly"},
}};

struct LetterStats {
  std::size_t letters = 0;
  std::size_t latin = 0;
  std::size_t expected = 0;
  std::size_t length = 0;
  std::size_t codepoints = 0;
  std::vector<Span> placeholders;
  std::vector<Span> unexpected_runs;
};

// Image placeholders are markup, not language, and are excluded from every
// count, the length included.
LetterStats letter_stats(std::string_view text, LanguageTag const& tag) {
  LetterStats stats;
  auto cps = decode_utf8(text);
  stats.codepoints = cps.size();
  stats.length = cps.size();
  static const std::u32string token = decode_utf8(kImagePlaceholder);
  for (auto pos = cps.find(token); pos != std::u32string::npos;
       pos = cps.find(token, pos + token.size())) {
    stats.placeholders.push_back({pos, pos + token.size()});
  }
  stats.length -= stats.placeholders.size() * token.size();
  auto masked = [&](std::size_t i) {
    for (auto const& p : stats.placeholders) {
      if (i >= p.start && i < p.end) return true;
    }
    return false;
  };

  for (auto const& run : classify_script_runs(text)) {
    bool expected = tag.expects_script(run.script);
    bool latin = run.script == "Latin";
    std::size_t run_letters = 0;
    for (auto i = run.start; i < run.end; ++i) {
      if (masked(i) || !is_letter(cps[i])) continue;
      ++run_letters;
      if (latin) ++stats.latin;
      if (expected) ++stats.expected;
    }
    stats.letters += run_letters;
    if (!expected && run_letters > 0) {
      stats.unexpected_runs.push_back({run.start, run.end});
    }
  }
  return stats;
}

}  // namespace

std::string_view flag_name(Flag flag) {
  for (auto const& [f, name] : kFlagNames) {
    if (f == flag) return name;
  }
  return "Unknown";
}

std::optional<Flag> parse_flag(std::string_view name) {
  for (auto const& [f, n] : kFlagNames) {
    if (n == name) return f;
  }
  return std::nullopt;
}

ValidationReport validate_translation(std::string_view source,
                                      std::string_view translation,
                                      Language lang,
                                      ValidationThresholds const& thresholds) {
  auto const& tag = tag_of(lang);
  ValidationReport report;
  auto src = letter_stats(source, tag_of(Language::kEnglish));
  auto out = letter_stats(translation, tag);

  report.latin_ratio = out.letters == 0
                           ? 0.0
                           : static_cast<double>(out.latin) /
                                 static_cast<double>(out.letters);

  if (src.placeholders.size() != out.placeholders.size()) {
    report.flags.insert(Flag::kPlaceholderMismatch);
    for (auto const& p : out.placeholders) {
      report.detail.push_back({Flag::kPlaceholderMismatch, p});
    }
  }
  if (src.letters > 0 && out.letters == 0) {
    report.flags.insert(Flag::kEmptyTranslation);
  }
  if (!tag.is_latin_script() && report.latin_ratio > thresholds.max_latin_ratio) {
    report.flags.insert(Flag::kExcessLatin);
    if (lang != Language::kEnglish) {
      for (auto const& s : find_untranslated_segments(translation, lang)) {
        report.detail.push_back({Flag::kExcessLatin, s});
      }
    }
  }
  if (out.letters > 0) {
    auto ratio = static_cast<double>(out.expected) /
                 static_cast<double>(out.letters);
    if (ratio < thresholds.min_expected_script_ratio) {
      report.flags.insert(Flag::kScriptMismatch);
      for (auto const& s : out.unexpected_runs) {
        report.detail.push_back({Flag::kScriptMismatch, s});
      }
    }
  }
  if (src.length > 0) {
    auto ratio = static_cast<double>(out.length) /
                 static_cast<double>(src.length);
    if (ratio < thresholds.min_length_ratio ||
        ratio > thresholds.max_length_ratio) {
      report.flags.insert(Flag::kLengthAnomaly);
      report.detail.push_back({Flag::kLengthAnomaly, {0, out.codepoints}});
    }
  }
  return report;
}

Json report_to_json(ValidationReport const& report) {
  Json j;
  auto flags = Json::array();
  for (auto f : report.flags) flags.push_back(flag_name(f));
  j["flags"] = std::move(flags);
  j["latin_ratio"] = report.latin_ratio;
  auto detail = Json::array();
  for (auto const& e : report.detail) {
    detail.push_back(Json{{"flag", flag_name(e.flag)},
                                            {"start", e.span.start},
                                            {"end", e.span.end}});
  }
  j["detail"] = std::move(detail);
  return j;
}

ValidationReport report_from_json(Json const& j) {
  ValidationReport report;
  auto to_flag = [](std::string const& name) {
    auto f = parse_flag(name);
    if (!f) throw ConfigError("unknown validation flag '" + name + "'");
    return *f;
  };
  for (auto const& f : j.at("flags")) {
    report.flags.insert(to_flag(f.get<std::string>()));
  }
  report.latin_ratio = j.value("latin_ratio", 0.0);
  for (auto const& e : j.value("detail", Json::array())) {
    report.detail.push_back({to_flag(e.at("flag").get<std::string>()),
                             {e.at("start").get<std::size_t>(),
                              e.at("end").get<std::size_t>()}});
  }
  return report;
}

}  // namespace palo_forge
