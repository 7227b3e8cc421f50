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

#include "palo_forge/benchmark.h"

#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "palo_forge/checkpoint.h"
#include "palo_forge/errors.h"
#include "palo_forge/llm_backend.h"
#include "test_util.h"

namespace palo_forge {
namespace {

using ::testing::Contains;
using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::IsEmpty;
using ::testing::Not;

std::vector<BenchmarkItem> english_bench() {
  return parse_benchmark(testing::read_fixture("bench_en.jsonl"));
}

std::vector<CandidateAnswer> answers_for(std::vector<BenchmarkItem> const& items) {
  std::vector<CandidateAnswer> out;
  for (auto const& i : items) out.push_back({i.image_id, i.question_index, i.lang, "answer"});
  return out;
}

TEST(BenchmarkFileTest, RoundTrip) {
  auto items = english_bench();
  ASSERT_EQ(items.size(), 60u);
  EXPECT_EQ(parse_benchmark(serialize_benchmark(items)), items);
  EXPECT_THROW(parse_benchmark(R"({"image_id": "x"})"), ValidationError);
  EXPECT_THROW(parse_benchmark(
                   R"({"image_id": "a", "question_index": 0, "question": "q", "reference_answer": "r", "category": "poetry", "lang": "en"})"),
               ValidationError);
}

TEST(BenchmarkShapeTest, EnglishFixture) {
  auto items = english_bench();
  auto shape = benchmark_shape(items, Language::kEnglish);
  EXPECT_EQ(shape.images, kBenchmarkImages);
  EXPECT_EQ(shape.questions, kBenchmarkQuestions);
  EXPECT_EQ(shape.categories[QuestionCategory::kDetail], 20u);
  EXPECT_NO_THROW(check_benchmark_shape(items, Language::kEnglish));
  EXPECT_NO_THROW(check_benchmark_shape(items, Language::kHindi));
  items.pop_back();
  EXPECT_THROW(check_benchmark_shape(items, Language::kEnglish), ValidationError);
  items.push_back(items.front());
  EXPECT_THROW(check_benchmark_shape(items, Language::kEnglish), ValidationError);
}

TEST(TranslateBenchmarkTest, NineLanguagesWithMock) {
  auto en = english_bench();
  MockBackend mock(BackendKind::kTranslator);
  auto langs = translated_languages();
  auto out = translate_benchmark(en, langs, mock);
  EXPECT_EQ(out.items.size(), 600u);
  EXPECT_EQ(out.items.size() - en.size(), 540u);
  EXPECT_EQ(out.units.size(), 1080u);
  auto en_shape = benchmark_shape(out.items, Language::kEnglish);
  for (auto lang : langs) {
    EXPECT_EQ(benchmark_shape(out.items, lang), en_shape) << code_of(lang);
    EXPECT_NO_THROW(check_benchmark_shape(out.items, lang));
  }
  // Echoed English fails script checks for every non-Latin language.
  EXPECT_FALSE(out.final());
  EXPECT_EQ(out.items[60].lang, Language::kChinese);
  EXPECT_EQ(out.items[60].question, "[zh] " + en[0].question);
}

TEST(TranslateBenchmarkTest, EmptyBench) {
  MockBackend mock(BackendKind::kTranslator);
  auto langs = translated_languages();
  auto out = translate_benchmark({}, langs, mock);
  EXPECT_THAT(out.items, IsEmpty());
  EXPECT_TRUE(out.final());
}

TEST(TranslateBenchmarkTest, CleanTranslationIsFinal) {
  std::vector<BenchmarkItem> en{{"img", 0, "What is this?", "A cat.", QuestionCategory::kDetail,
                                 Language::kEnglish}};
  ScriptedBackend b("t", [](std::span<ChatMessage const> m) {
    return m.back().content == "What is this?" ? std::string("Что это?")
                                               : std::string("Кошка.");
  });
  std::vector<Language> ru{Language::kRussian};
  // A one-item benchmark fails the 24/60 shape check.
  EXPECT_THROW(translate_benchmark(en, ru, b), ValidationError);
}

TEST(TranslateBenchmarkTest, LostQuestionMarkRoutedToReview) {
  auto en = english_bench();
  ScriptedBackend b("t", [](std::span<ChatMessage const> m) {
    std::string s = m.back().content;
    bool q = !s.empty() && s.back() == '?';
    return q ? std::string("Что на фото") : std::string("На фото кошка и собака рядом.");
  });
  std::vector<Language> ru{Language::kRussian};
  auto out = translate_benchmark(en, ru, b);
  ASSERT_EQ(out.review_queue.size(), 60u);
  auto const& e = out.review_queue[0];
  EXPECT_EQ(e.unit.turn_index, 0);
  EXPECT_THAT(e.reasons, Contains("question mark lost"));
  EXPECT_THAT(e.suggested_tags, Contains(IssueTag::kPunctuation));
  auto j = review_queue_to_json(out.review_queue);
  EXPECT_EQ(j.size(), 60u);
  EXPECT_EQ(j[0]["suggested_tags"][0], "Punctuation");
}

TEST(TranslateBenchmarkTest, QuestionMarkVariants) {
  EXPECT_TRUE(lost_question_mark("Why?", "Pourquoi"));
  EXPECT_FALSE(lost_question_mark("Why?", "为什么？"));
  EXPECT_FALSE(lost_question_mark("Why?", "لماذا؟"));
  EXPECT_FALSE(lost_question_mark("Why? ", "Pourquoi ? "));
  EXPECT_FALSE(lost_question_mark("Tell me.", "Dis-moi."));
}

TEST(TranslateBenchmarkTest, BackendFailureIsCountMismatch) {
  auto en = english_bench();
  ScriptedBackend b("t", [](std::span<ChatMessage const> m) -> std::string {
    if (m.back().content.find("Item 5.") != std::string::npos) {
      throw BackendError(BackendErrorKind::kExhausted, "down");
    }
    return "x";
  });
  std::vector<Language> fr{Language::kFrench};
  try {
    translate_benchmark(en, fr, b);
    FAIL();
  } catch (ValidationError const& e) {
    EXPECT_EQ(e.rule(), "benchmark count mismatch");
    EXPECT_THAT(e.what(), HasSubstr("59 items"));
  }
}

TEST(TranslateBenchmarkTest, CacheReuse) {
  auto en = english_bench();
  MockBackend mock(BackendKind::kTranslator);
  Checkpoint cache("bench");
  TranslationStats stats;
  std::vector<Language> hi{Language::kHindi};
  auto a = translate_benchmark(en, hi, mock, {}, &cache, &stats);
  auto calls = mock.calls();
  auto b = translate_benchmark(en, hi, mock, {}, &cache, &stats);
  EXPECT_EQ(mock.calls(), calls);
  EXPECT_EQ(a.items, b.items);
}

TEST(JudgeParseTest, Strict) {
  auto v = parse_judge_verdict("Score-A: 10 Score-B: 5");
  EXPECT_EQ(v.reference_score, 10);
  EXPECT_EQ(v.candidate_score, 5);
  auto with_text = parse_judge_verdict("Assistant B is vaguer.\nScore-A: 9 Score-B: 7\n");
  EXPECT_EQ(with_text.candidate_score, 7);
  EXPECT_THAT(with_text.rationale, HasSubstr("vaguer"));
  EXPECT_THROW(parse_judge_verdict("great answer!"), JudgeParseError);
  EXPECT_THROW(parse_judge_verdict("Score-A: 11 Score-B: 5"), JudgeParseError);
  EXPECT_THROW(parse_judge_verdict("Score-A: 0 Score-B: 5"), JudgeParseError);
  EXPECT_THROW(parse_judge_verdict("Score-A: 8 Score-B: 8\nScore-A: 7 Score-B: 7"),
               JudgeParseError);
  EXPECT_THROW(parse_judge_verdict("Score-A: 8, Score-B: 8"), JudgeParseError);
}

TEST(JudgePairwiseTest, MockDefault) {
  auto item = english_bench()[0];
  MockBackend judge(BackendKind::kJudge);
  auto v = judge_pairwise(item, "cand", judge);
  EXPECT_EQ(v.reference_score, 8);
  EXPECT_EQ(v.candidate_score, 8);
}

TEST(JudgePairwiseTest, PromptCarriesBothAnswers) {
  auto item = english_bench()[0];
  std::string seen;
  ScriptedBackend judge("j", [&](std::span<ChatMessage const> m) {
    for (auto const& msg : m) seen += msg.content;
    return std::string("Score-A: 6 Score-B: 4");
  });
  judge_pairwise(item, "CANDIDATE", judge);
  EXPECT_THAT(seen, HasSubstr(item.question));
  EXPECT_THAT(seen, HasSubstr(item.reference_answer));
  EXPECT_THAT(seen, HasSubstr("CANDIDATE"));
  seen.clear();
  judge_pairwise(item, "CANDIDATE", judge, "OVERRIDE");
  EXPECT_THAT(seen, HasSubstr("OVERRIDE"));
}

TEST(JudgePairwiseTest, RetriesParseFailureOnce) {
  auto item = english_bench()[0];
  auto ok = ScriptedBackend::sequence("j", {"hmm", "Score-A: 8 Score-B: 6"});
  EXPECT_EQ(judge_pairwise(item, "c", *ok).candidate_score, 6);
  EXPECT_EQ(ok->calls(), 2);
  auto bad = ScriptedBackend::sequence("j", {"hmm"});
  EXPECT_THROW(judge_pairwise(item, "c", *bad), JudgeParseError);
  EXPECT_EQ(bad->calls(), 2);
}

TEST(RunJudgingTest, ScriptedVerdicts) {
  auto bench = english_bench();
  bench.resize(2);
  auto judge = ScriptedBackend::sequence("j", {"Score-A: 8 Score-B: 6", "Score-A: 8 Score-B: 8"});
  auto report = run_judging(bench, answers_for(bench), *judge, "m");
  auto const& en = report.languages.at(Language::kEnglish);
  EXPECT_EQ(en.score, 875);
  EXPECT_EQ(en.n(), 2);
  EXPECT_THAT(report.warnings, IsEmpty());
  auto j = judge_report_to_json(report);
  EXPECT_EQ(j["languages"]["en"]["score"].dump(), "87.5");
  EXPECT_EQ(j["languages"]["en"]["sum_candidate"], 14);
}

TEST(RunJudgingTest, ParseFailureExcludedWithWarning) {
  auto bench = english_bench();
  bench.resize(3);
  int call = 0;
  ScriptedBackend judge("j", [&](std::span<ChatMessage const>) {
    ++call;
    // The second item gets garbage twice.
    return (call == 2 || call == 3) ? std::string("no idea") : std::string("Score-A: 8 Score-B: 8");
  });
  auto report = run_judging(bench, answers_for(bench), judge, "m");
  auto const& en = report.languages.at(Language::kEnglish);
  EXPECT_EQ(en.attempted, 3);
  EXPECT_EQ(en.failures, 1);
  EXPECT_EQ(en.n(), 2);
  EXPECT_EQ(en.score, 1000);
  ASSERT_EQ(report.warnings.size(), 1u);
  EXPECT_THAT(report.warnings[0], HasSubstr("1 of 3 judgments failed"));
  EXPECT_THAT(en.failure_messages[0], HasSubstr("no score line"));
}

TEST(RunJudgingTest, MissingAnswersAndEnglishReference) {
  auto en = english_bench();
  MockBackend tr(BackendKind::kTranslator);
  std::vector<Language> hi{Language::kHindi};
  auto bench = translate_benchmark(en, hi, tr).items;
  std::vector<CandidateAnswer> answers;
  for (auto const& i : bench) {
    if (i.lang == Language::kHindi && i.question_index < 50) {
      answers.push_back({i.image_id, i.question_index, i.lang, "उत्तर"});
    }
  }
  std::string refs;
  ScriptedBackend judge("j", [&](std::span<ChatMessage const> m) {
    refs += m.back().content;
    return std::string("Score-A: 10 Score-B: 5");
  });
  JudgeOptions opts;
  opts.reference = ReferenceSource::kEnglish;
  opts.parallelism = 4;
  auto report = run_judging(bench, answers, judge, "m", opts);
  ASSERT_EQ(report.languages.size(), 1u);
  auto const& lj = report.languages.at(Language::kHindi);
  EXPECT_EQ(lj.attempted, 60);
  EXPECT_EQ(lj.failures, 10);
  EXPECT_EQ(lj.n(), 50);
  EXPECT_EQ(lj.score, 500);
  EXPECT_EQ(report.warnings.size(), 1u);
  EXPECT_THAT(refs, Not(HasSubstr("[hi] The photo")));
}

TEST(RunJudgingTest, Candidates) {
  auto c = parse_candidates(
      R"({"image_id": "img00", "question_index": 0, "lang": "hi", "answer": "x"})"
      "\n");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].lang, Language::kHindi);
  auto bench = english_bench();
  auto dup = answers_for(bench);
  dup.push_back(dup[0]);
  MockBackend judge(BackendKind::kJudge);
  EXPECT_THROW(run_judging(bench, dup, judge, "m"), UsageError);
}

}  // namespace
}  // namespace palo_forge
