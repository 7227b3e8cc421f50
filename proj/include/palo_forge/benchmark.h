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

// The multilingual benchmark: translation of the English items, pairwise
// judging of candidate answers and per-language relative scores.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "palo_forge/errors.h"
#include "palo_forge/json.h"
#include "palo_forge/language.h"
#include "palo_forge/llm_backend.h"
#include "palo_forge/scoring.h"
#include "palo_forge/translation.h"

namespace palo_forge {

inline constexpr std::size_t kBenchmarkImages = 24;
inline constexpr std::size_t kBenchmarkQuestions = 60;

enum class QuestionCategory { kConversation, kDetail, kComplex };

std::string_view category_name(QuestionCategory c);
std::optional<QuestionCategory> parse_category(std::string_view name);

struct BenchmarkItem {
  std::string image_id;
  int question_index = 0;
  std::string question;
  std::string reference_answer;
  QuestionCategory category = QuestionCategory::kConversation;
  Language lang = Language::kEnglish;

  friend bool operator==(BenchmarkItem const&, BenchmarkItem const&) = default;
};

/// JSON Lines of {"image_id", "question_index", "question",
/// "reference_answer", "category", "lang"}.
std::vector<BenchmarkItem> parse_benchmark(std::string_view text);
std::string serialize_benchmark(std::span<BenchmarkItem const> items);

struct BenchmarkShape {
  std::size_t images = 0;
  std::size_t questions = 0;
  std::map<QuestionCategory, std::size_t> categories;

  friend bool operator==(BenchmarkShape const&, BenchmarkShape const&) = default;
};

/// Shape of the items of one language.
BenchmarkShape benchmark_shape(std::span<BenchmarkItem const> items,
                               Language lang);

/// Throws ValidationError unless the items of `lang` are empty or span 24
/// distinct images and 60 distinct questions.
void check_benchmark_shape(std::span<BenchmarkItem const> items, Language lang);

/// A translated item held back for human correction.
struct ReviewQueueEntry {
  TranslationUnit unit;
  std::vector<std::string> reasons;
  std::set<IssueTag> suggested_tags;
};

struct BenchmarkTranslation {
  /// English items first, then each language, each in input order.
  std::vector<BenchmarkItem> items;
  /// Question (turn 0) and reference answer (turn 1) units per item, keyed
  /// by record id "<image_id>:<question_index>".
  std::vector<TranslationUnit> units;
  std::vector<ReviewQueueEntry> review_queue;

  /// A benchmark is final once nothing awaits review.
  bool final() const { return review_queue.empty(); }
};

/// True when `source` ends in a question mark and `translation` does not
/// end in any script's question mark.
bool lost_question_mark(std::string_view source, std::string_view translation);

/// Translates every English item into each language. Flagged units and
/// questions that lost their question mark go to the review queue. Throws
/// ValidationError if the English items have the wrong shape, or if any
/// language ends up with a different item count (for example after backend
/// failures).
BenchmarkTranslation translate_benchmark(std::span<BenchmarkItem const> english,
                                         std::span<Language const> languages,
                                         Backend& backend,
                                         TranslationOptions const& options = {},
                                         TranslationCache* cache = nullptr,
                                         TranslationStats* stats = nullptr);

Json review_queue_to_json(std::span<ReviewQueueEntry const> queue);

/// Judge output could not be read as two scores.
class JudgeParseError : public Error {
 public:
  using Error::Error;
};

/// Requires exactly one line "Score-A: <1-10> Score-B: <1-10>"; the other
/// lines become the rationale. Throws JudgeParseError otherwise.
JudgeVerdict parse_judge_verdict(std::string_view text);

/// Assistant A is the reference, assistant B the candidate.
std::vector<ChatMessage> build_judge_prompt(std::string_view question,
                                            std::string_view reference,
                                            std::string_view candidate,
                                            Language lang);

/// One judge call; an unparseable reply is retried once before the
/// JudgeParseError propagates.
JudgeVerdict judge_pairwise(BenchmarkItem const& item,
                            std::string_view candidate_answer, Backend& judge,
                            std::string_view reference_override = {});

struct CandidateAnswer {
  std::string image_id;
  int question_index = 0;
  Language lang = Language::kEnglish;
  std::string answer;
};

/// JSON Lines of {"image_id", "question_index", "lang", "answer"}.
std::vector<CandidateAnswer> parse_candidates(std::string_view text);

enum class ReferenceSource { kTargetLanguage, kEnglish };

struct JudgeOptions {
  ReferenceSource reference = ReferenceSource::kTargetLanguage;
  int parallelism = 1;
};

struct LanguageJudgement {
  std::int64_t attempted = 0;
  std::int64_t failures = 0;
  std::vector<std::string> failure_messages;
  std::vector<JudgeVerdict> verdicts;
  std::optional<Tenths> score;

  std::int64_t n() const { return attempted - failures; }
};

struct JudgeReport {
  std::string model_id;
  std::map<Language, LanguageJudgement> languages;
  std::vector<std::string> warnings;
};

/// Judges every benchmark item that has a candidate answer. Missing answers,
/// judge parse failures and backend failures are counted as failures, and
/// any failure in a language adds a warning.
JudgeReport run_judging(std::span<BenchmarkItem const> benchmark,
                        std::span<CandidateAnswer const> candidates,
                        Backend& judge, std::string model_id,
                        JudgeOptions const& options = {});

Json judge_report_to_json(JudgeReport const& report);

}  // namespace palo_forge
