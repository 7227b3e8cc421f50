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

// Per-language punctuation and spacing fixes for machine translations.
//
// A rule is an ordered list of regex rewrite steps (ICU syntax, so Unicode
// properties like \p{Devanagari} work). Rules touch only punctuation and
// whitespace, so they never split a combining sequence or alter the image
// placeholder.
//
// Rule table file (JSON):
//
//   {
//     "languages": {
//       "ar": [
//         {"rule_id": "ar.comma_spacing", "description": "...",
//          "match": "\\h+([،؛])", "replace": "$1"},
//         {"rule_id": "ar.comma_spacing", "match": "...", "replace": "..."}
//       ]
//     },
//     "enable": ["fr.thin_space"],
//     "disable": []
//   }
//
// Consecutive entries sharing a rule_id are the steps of one rule. A
// language listed under "languages" replaces its built-in rules entirely.

#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "palo_forge/language.h"

namespace palo_forge {

struct RewriteStep {
  std::string match;
  std::string replace;
};

class CorrectionRule {
 public:
  /// Throws ConfigError if a pattern does not compile.
  CorrectionRule(std::string rule_id, Language language,
                 std::string description, std::vector<RewriteStep> steps,
                 bool enabled = true);

  std::string const& rule_id() const { return rule_id_; }
  Language language() const { return language_; }
  std::string const& description() const { return description_; }
  std::vector<RewriteStep> const& steps() const { return steps_; }
  bool enabled() const { return enabled_; }
  void set_enabled(bool enabled) { enabled_ = enabled; }

  /// Runs the steps repeatedly until the text stops changing, which makes
  /// the transform idempotent.
  std::string transform(std::string_view text) const;

 private:
  struct Compiled;

  std::string rule_id_;
  Language language_;
  std::string description_;
  std::vector<RewriteStep> steps_;
  std::shared_ptr<Compiled const> compiled_;
  bool enabled_;
};

struct CorrectionResult {
  std::string corrected;
  /// Rules that changed the text, in first-application order.
  std::vector<std::string> applied;
};

class RuleSet {
 public:
  RuleSet() = default;

  /// The compiled-in inventory.
  static RuleSet const& builtin();

  /// Built-ins overlaid with a rule table document (see file comment).
  static RuleSet from_json(std::string_view document);
  static RuleSet load(std::filesystem::path const& path);

  std::span<CorrectionRule const> rules_for(Language lang) const {
    return rules_[index_of(lang)];
  }

  /// Throws ConfigError for an unknown rule id.
  void set_enabled(std::string_view rule_id, bool enabled);

  /// Fixpoint of the language's ordered, enabled rules. Throws ConfigError
  /// if a rule changes the placeholder count or the rules do not converge.
  CorrectionResult apply(std::string_view text, Language lang) const;

 private:
  std::array<std::vector<CorrectionRule>, kLanguageCount> rules_;
};

/// apply() with the built-in rules.
CorrectionResult apply_corrections(std::string_view text, Language lang);

}  // namespace palo_forge
