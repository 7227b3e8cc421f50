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

#include "palo_forge/corrections.h"

#include <unicode/regex.h>
#include <unicode/unistr.h>

#include <algorithm>

#include "palo_forge/dataset.h"
#include "palo_forge/errors.h"
#include "palo_forge/io.h"
#include "palo_forge/json.h"

namespace palo_forge {

struct CorrectionRule::Compiled {
  std::vector<std::unique_ptr<icu::RegexPattern>> patterns;
};

namespace {

// Both passes are bounded; real rule tables converge in two or three.
constexpr int kMaxRulePasses = 16;
constexpr int kMaxSetPasses = 16;

icu::UnicodeString to_icu(std::string_view s) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

std::string from_icu(icu::UnicodeString const& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

// Arabic-script punctuation spacing: no space before the mark, exactly one
// space between the mark and a following letter. Digits after a period are
// left alone so decimals survive.
std::vector<RewriteStep> arabic_spacing(std::string_view marks) {
  std::string cls = "[" + std::string(marks) + "]";
  return {
      {R"(\h+()" + cls + ")", "$1"},
      {"(" + cls + R"()\h*(?=\p{L}))", "$1 "},
  };
}

// ASCII punctuation after a CJK character, followed by CJK, whitespace or
// end of text, becomes its full-width form.
std::vector<RewriteStep> cjk_fullwidth() {
  std::string const cjk = R"([\p{Han}\p{Hiragana}\p{Katakana}\x{30FC}])";
  auto step = [&](std::string_view ascii, std::string_view wide) {
    return RewriteStep{"(?<=" + cjk + ")" + std::string(ascii) + "(?=" + cjk +
                           R"(|\s|$))",
                       std::string(wide)};
  };
  return {step(",", "，"), step(R"(\.)", "。"), step(R"(\?)", "？"),
          step("!", "！"), step(":", "：")};
}

std::vector<CorrectionRule> builtin_rules(Language lang) {
  using L = Language;
  std::vector<CorrectionRule> out;
  auto add = [&](std::string id, std::string desc,
                 std::vector<RewriteStep> steps, bool enabled = true) {
    out.emplace_back(std::move(id), lang, std::move(desc), std::move(steps),
                     enabled);
  };
  auto const code = std::string(code_of(lang));
  switch (lang) {
    case L::kArabic:
    case L::kUrdu:
      add(code + ".comma_spacing",
          "no space before Arabic comma/semicolon, one space after",
          arabic_spacing("،؛"));
      add(code + ".question_spacing",
          "no space before Arabic question mark, one space after",
          arabic_spacing("؟"));
      add(code + ".period_spacing",
          "no space before full stop, one space before a following word",
          arabic_spacing(lang == L::kUrdu ? R"(\.۔)" : R"(\.)"));
      break;
    case L::kChinese:
    case L::kJapanese:
      add(code + ".fullwidth_punct",
          "ASCII , . ? ! : next to CJK text become full-width",
          cjk_fullwidth());
      break;
    case L::kHindi:
      add("hi.danda", "sentence-final period after Devanagari becomes danda",
          {{R"((?<=\p{Devanagari})\.(?=\s|$))", "।"}});
      break;
    case L::kRussian:
    case L::kFrench:
    case L::kSpanish:
      add(code + ".punct_spacing", "no space before comma or period",
          {{R"(\h+([,.]))", "$1"}});
      if (lang == L::kFrench) {
        add("fr.thin_space",
            "narrow no-break space before ; : ! ? (French typography)",
            {{R"((?<=\p{L})\h*([;:!?]))", "\u202F$1"}}, false);
      }
      break;
    case L::kEnglish:
    case L::kBengali:
      break;
  }
  return out;
}

}  // namespace

CorrectionRule::CorrectionRule(std::string rule_id, Language language,
                               std::string description,
                               std::vector<RewriteStep> steps, bool enabled)
    : rule_id_(std::move(rule_id)),
      language_(language),
      description_(std::move(description)),
      steps_(std::move(steps)),
      enabled_(enabled) {
  auto compiled = std::make_shared<Compiled>();
  for (auto const& step : steps_) {
    UErrorCode status = U_ZERO_ERROR;
    UParseError perr;
    std::unique_ptr<icu::RegexPattern> p(
        icu::RegexPattern::compile(to_icu(step.match), 0, perr, status));
    if (U_FAILURE(status)) {
      throw ConfigError("rule '" + rule_id_ + "': bad pattern '" + step.match +
                        "': " + u_errorName(status));
    }
    compiled->patterns.push_back(std::move(p));
  }
  compiled_ = std::move(compiled);
}

std::string CorrectionRule::transform(std::string_view text) const {
  auto current = to_icu(text);
  for (int pass = 0; pass < kMaxRulePasses; ++pass) {
    auto before = current;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      UErrorCode status = U_ZERO_ERROR;
      std::unique_ptr<icu::RegexMatcher> m(
          compiled_->patterns[i]->matcher(current, status));
      auto replaced = m->replaceAll(to_icu(steps_[i].replace), status);
      if (U_FAILURE(status)) {
        throw ConfigError("rule '" + rule_id_ + "' failed: " +
                          u_errorName(status));
      }
      current = std::move(replaced);
    }
    if (current == before) return from_icu(current);
  }
  throw ConfigError("rule '" + rule_id_ + "' does not reach a fixpoint");
}

RuleSet const& RuleSet::builtin() {
  static RuleSet const kBuiltin = [] {
    RuleSet set;
    for (auto lang : all_languages()) {
      set.rules_[index_of(lang)] = builtin_rules(lang);
    }
    return set;
  }();
  return kBuiltin;
}

RuleSet RuleSet::from_json(std::string_view document) {
  auto doc = parse_json(document, "rule table");
  if (!doc.is_object()) throw ConfigError("rule table must be a JSON object");

  RuleSet set = builtin();
  try {
    if (auto it = doc.find("languages"); it != doc.end()) {
      for (auto const& [code, entries] : it->items()) {
        auto lang = parse_language_code(code);
        if (!lang) throw ConfigError("rule table: unknown language " + code);
        std::vector<CorrectionRule> rules;
        std::string id, description;
        std::vector<RewriteStep> steps;
        bool enabled = true;
        auto flush = [&] {
          if (!steps.empty()) {
            rules.emplace_back(id, *lang, description, std::move(steps),
                               enabled);
          }
          steps.clear();
        };
        for (auto const& e : entries) {
          auto rule_id = e.at("rule_id").get<std::string>();
          if (rule_id != id) {
            flush();
            id = rule_id;
            description = e.value("description", "");
            enabled = e.value("enabled", true);
          }
          steps.push_back(
              {e.at("match").get<std::string>(),
               e.at("replace").get<std::string>()});
        }
        flush();
        set.rules_[index_of(*lang)] = std::move(rules);
      }
    }
    for (auto const& id : doc.value("enable", Json::array())) {
      set.set_enabled(id.get<std::string>(), true);
    }
    for (auto const& id : doc.value("disable", Json::array())) {
      set.set_enabled(id.get<std::string>(), false);
    }
  } catch (Json::exception const& e) {
    throw ConfigError(std::string("rule table: ") + e.what());
  }
  return set;
}

RuleSet RuleSet::load(std::filesystem::path const& path) {
  return from_json(read_file(path));
}

void RuleSet::set_enabled(std::string_view rule_id, bool enabled) {
  for (auto& rules : rules_) {
    for (auto& r : rules) {
      if (r.rule_id() == rule_id) {
        r.set_enabled(enabled);
        return;
      }
    }
  }
  throw ConfigError("unknown rule '" + std::string(rule_id) + "'");
}

CorrectionResult RuleSet::apply(std::string_view text, Language lang) const {
  CorrectionResult result{std::string(text), {}};
  auto const placeholders = count_placeholders(text);
  auto const& rules = rules_[index_of(lang)];
  for (int pass = 0; pass < kMaxSetPasses; ++pass) {
    bool changed = false;
    for (auto const& rule : rules) {
      if (!rule.enabled()) continue;
      auto next = rule.transform(result.corrected);
      if (next == result.corrected) continue;
      if (count_placeholders(next) != placeholders) {
        throw ConfigError("rule '" + rule.rule_id() +
                          "' altered the image placeholder count");
      }
      result.corrected = std::move(next);
      changed = true;
      if (std::find(result.applied.begin(), result.applied.end(),
                    rule.rule_id()) == result.applied.end()) {
        result.applied.push_back(rule.rule_id());
      }
    }
    if (!changed) return result;
  }
  throw ConfigError("correction rules for '" + std::string(code_of(lang)) +
                    "' do not converge");
}

CorrectionResult apply_corrections(std::string_view text, Language lang) {
  return RuleSet::builtin().apply(text, lang);
}

}  // namespace palo_forge
