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

// Per-turn machine translation with correction, validation and the unit
// ledger that carries each turn through human review.

#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "palo_forge/corrections.h"
#include "palo_forge/dataset.h"
#include "palo_forge/json.h"
#include "palo_forge/language.h"
#include "palo_forge/llm_backend.h"
#include "palo_forge/validation.h"

namespace palo_forge {

enum class UnitStatus { kMachine, kFlagged, kReviewed, kAccepted };

std::string_view status_name(UnitStatus status);
std::optional<UnitStatus> parse_status(std::string_view name);

/// Reviewer-facing issue vocabulary.
enum class IssueTag { kPunctuation, kGender, kUntranslated, kGrammar, kNunnation, kOther };

std::string_view issue_tag_name(IssueTag tag);
std::optional<IssueTag> parse_issue_tag(std::string_view name);
std::span<IssueTag const> all_issue_tags();

struct UnitKey {
  std::string record_id;
  int turn_index = 0;
  Language lang = Language::kEnglish;

  /// "record_id#turn@lang", used in messages and as a map key on the wire.
  std::string to_string() const;

  friend auto operator<=>(UnitKey const&, UnitKey const&) = default;
  friend bool operator==(UnitKey const&, UnitKey const&) = default;
};

Json key_to_json(UnitKey const& key);
UnitKey key_from_json(Json const& j);

struct TranslationUnit {
  std::string record_id;
  int turn_index = 0;
  Language lang = Language::kEnglish;
  std::string source_text;
  std::string machine_text;
  std::optional<std::string> corrected_text;
  ValidationReport report;
  UnitStatus status = UnitStatus::kMachine;
  /// Correction rules that fired on the raw backend output.
  std::vector<std::string> applied_rules;
  std::set<IssueTag> issue_tags;
  std::optional<std::string> note;

  UnitKey key() const { return {record_id, turn_index, lang}; }
  bool reviewed() const {
    return status == UnitStatus::kReviewed || status == UnitStatus::kAccepted;
  }

  friend bool operator==(TranslationUnit const&,
                         TranslationUnit const&) = default;
};

/// Throws ValidationError unless corrected_text is present exactly for
/// Reviewed/Accepted units and Flagged units carry at least one flag.
void check_unit(TranslationUnit const& unit);

Json unit_to_json(TranslationUnit const& unit);
TranslationUnit unit_from_json(Json const& j);

/// JSON Lines, one unit per line.
std::string serialize_unit_ledger(std::span<TranslationUnit const> units);
std::vector<TranslationUnit> parse_unit_ledger(std::string_view text);

/// Stands in for `<image>` while text is at the backend.
inline constexpr std::string_view kPlaceholderSentinel = "[[IMAGE]]";

std::string mask_placeholders(std::string_view text);
std::string unmask_placeholders(std::string_view text);

/// The translation prompt: a system message naming the target (and ending
/// in "Target language code: xx"), an optional context message, then the
/// masked source as the user message.
std::vector<ChatMessage> build_translation_prompt(std::string_view masked_source,
                                                  Language lang,
                                                  std::string_view context = {});

/// Identity of one backend request for caching purposes.
struct CacheKey {
  std::string backend_id;
  Language lang = Language::kEnglish;
  std::string source_text;
  /// sha256 of the conversation context, or empty when none was sent.
  std::string context_digest;

  friend auto operator<=>(CacheKey const&, CacheKey const&) = default;
};

class TranslationCache {
 public:
  virtual ~TranslationCache() = default;
  virtual std::optional<std::string> lookup(CacheKey const& key) const = 0;
  virtual void store(CacheKey const& key, std::string const& output) = 0;
};

struct TranslationStats {
  std::atomic<std::int64_t> backend_calls{0};
  std::atomic<std::int64_t> cache_hits{0};
};

struct TranslationOptions {
  /// Null means the built-in rules.
  RuleSet const* rules = nullptr;
  ValidationThresholds thresholds;
  /// Send the preceding source turns as untranslated context.
  bool include_context = false;
};

struct UnitFailure {
  UnitKey key;
  std::string message;
};

struct RecordTranslation {
  InstructionRecord record;
  std::vector<TranslationUnit> units;
  std::vector<UnitFailure> failures;

  bool complete() const { return failures.empty(); }
  bool flagged() const;
};

/// Translates, corrects and validates one turn. Empty sources short-circuit
/// without a backend call. Backend errors propagate.
TranslationUnit translate_turn(std::string const& record_id, int turn_index,
                               std::string_view source, Language lang,
                               Backend& backend,
                               TranslationOptions const& options = {},
                               std::string_view context = {},
                               TranslationCache* cache = nullptr,
                               TranslationStats* stats = nullptr);

/// Translates every turn. A BackendError on a turn becomes a UnitFailure and
/// leaves the record incomplete; an incomplete record carries no units.
/// Other exceptions propagate. Throws UsageError for lang = en.
RecordTranslation translate_record(InstructionRecord const& record,
                                   Language lang, Backend& backend,
                                   TranslationOptions const& options = {},
                                   TranslationCache* cache = nullptr,
                                   TranslationStats* stats = nullptr);

/// Replaces turn text with corrected_text for the Reviewed/Accepted units of
/// `lang`; everything else is untouched and units of other languages are
/// ignored. Throws DanglingReferenceError listing unknown keys and
/// ValidationError if a correction changes a turn's placeholder count.
std::vector<InstructionRecord> merge_corrections(
    std::span<InstructionRecord const> records,
    std::span<TranslationUnit const> units, Language lang);

/// Fine-tune corpus as JSON Lines of {"messages": [system, user, assistant]},
/// ordered by (record_id, turn_index). Throws UsageError for units of another
/// language and ValidationError for units lacking corrected_text.
std::string export_finetune_corpus(std::span<TranslationUnit const> units,
                                   Language lang);

}  // namespace palo_forge
