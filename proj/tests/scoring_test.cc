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

#include <map>
#include <random>
#include <string>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "palo_forge/errors.h"
#include "palo_forge/io.h"
#include "test_util.h"

namespace palo_forge {
namespace {

using ::testing::HasSubstr;

std::map<Language, Tenths> row(std::array<Tenths, kLanguageCount> const& cells) {
  std::map<Language, Tenths> out;
  for (auto lang : all_languages()) out[lang] = cells[index_of(lang)];
  return out;
}

ScoreTable table1() {
  return score_table_from_json(
      parse_json(testing::read_fixture("table1.json"), "table1"));
}

TEST(RoundingTest, HalfAwayFromZero) {
  EXPECT_EQ(round_half_away(5, 10), 1);
  EXPECT_EQ(round_half_away(4, 10), 0);
  EXPECT_EQ(round_half_away(-5, 10), -1);
  EXPECT_EQ(round_half_away(-15, 10), -2);
  EXPECT_EQ(round_half_away(14, 10), 1);
  EXPECT_EQ(round_half_away(0, 3), 0);
  EXPECT_THROW(round_half_away(1, 0), UsageError);
}

TEST(TenthsTest, ParseAndFormat) {
  EXPECT_EQ(parse_tenths("67.9"), 679);
  EXPECT_EQ(parse_tenths("-3.7"), -37);
  EXPECT_EQ(parse_tenths("50"), 500);
  EXPECT_EQ(parse_tenths("+1.6"), 16);
  EXPECT_THROW(parse_tenths("1.25"), ParseError);
  EXPECT_THROW(parse_tenths("abc"), ParseError);
  EXPECT_EQ(tenths_from_json(Json(55.7)), 557);
  EXPECT_EQ(tenths_from_json(Json("13.9")), 139);
  EXPECT_EQ(tenths_from_json(Json(12)), 120);
  EXPECT_THROW(tenths_from_json(Json(1.23)), ParseError);
  EXPECT_EQ(format_tenths(0), "0.0");
  EXPECT_EQ(format_tenths(-8), "-0.8");
  EXPECT_EQ(format_tenths(282, true), "+28.2");
  EXPECT_EQ(format_tenths(0, true), "0.0");
  EXPECT_EQ(tenths_to_json(469).dump(), "46.9");
}

TEST(ScoreLanguageTest, Formula) {
  std::vector<JudgeVerdict> even(5, {8, 8, ""});
  EXPECT_EQ(score_language(even), 1000);
  std::vector<JudgeVerdict> mixed{{8, 6, ""}, {8, 8, ""}};
  EXPECT_EQ(score_language(mixed), 875);
  std::vector<JudgeVerdict> weak(60, {10, 1, ""});
  EXPECT_EQ(score_language(weak), 100);
}

TEST(ScoreLanguageTest, Errors) {
  EXPECT_THROW(score_language({}), UsageError);
  std::vector<JudgeVerdict> bad{{0, 5, ""}};
  EXPECT_THROW(score_language(bad), ValidationError);
  std::vector<JudgeVerdict> bad2{{5, 11, ""}};
  EXPECT_THROW(score_language(bad2), ValidationError);
}

TEST(ScoreLanguageTest, ScaleConsistentProperty) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<JudgeVerdict> v, doubled;
    int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      JudgeVerdict j{1 + static_cast<int>(rng() % 10), 1 + static_cast<int>(rng() % 10), ""};
      v.push_back(j);
      doubled.push_back(j);
      doubled.push_back(j);
    }
    ASSERT_EQ(score_language(v), score_language(doubled));
  }
}

// Expected values below come from tests/oracles/table_arithmetic.py.

TEST(AggregateTest, LlavaSevenB) {
  auto r = aggregate_table(row({679, 557, 624, 645, 553, 592, 389, 294, 139, 218}), "LLaVA-7B");
  EXPECT_EQ(r.avg_high(), 608);
  EXPECT_EQ(r.avg_low(), 260);
  EXPECT_EQ(r.avg_all(), 469);
}

TEST(AggregateTest, PaloSevenB) {
  auto r = aggregate_table(row({642, 557, 583, 610, 574, 575, 578, 576, 517, 553}), "PALO-7B");
  EXPECT_EQ(r.avg_high(), 590);
  EXPECT_EQ(r.avg_low(), 556);
  EXPECT_EQ(r.avg_all(), 577);
}

TEST(AggregateTest, AllZero) {
  auto r = aggregate_table(row({}), "zero");
  EXPECT_EQ(r.avg_high(), 0);
  EXPECT_EQ(r.avg_low(), 0);
  EXPECT_EQ(r.avg_all(), 0);
}

TEST(AggregateTest, MissingLanguage) {
  auto scores = row({});
  scores.erase(Language::kUrdu);
  EXPECT_THROW(aggregate_table(scores, "x"), UsageError);
}

TEST(AggregateTest, FullTableOne) {
  auto t = table1();
  ASSERT_EQ(t.rows.size(), 6u);
  ASSERT_EQ(t.deltas.size(), 3u);
  struct Expect {
    Tenths h, l, a;
  };
  std::vector<Expect> rows{{608, 260, 469}, {590, 556, 577}, {654, 269, 500},
                           {638, 592, 620}, {303, 143, 239}, {393, 259, 339}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(t.rows[i].avg_high(), rows[i].h) << t.rows[i].model_id;
    EXPECT_EQ(t.rows[i].avg_low(), rows[i].l) << t.rows[i].model_id;
    EXPECT_EQ(t.rows[i].avg_all(), rows[i].a) << t.rows[i].model_id;
  }
  std::vector<std::array<Tenths, 13>> deltas{
      {-37, 0, -41, -35, 21, -17, 189, 282, 378, 335, -18, 296, 108},
      {-40, -8, -11, 13, 1, -47, 197, 390, 331, 375, -15, 323, 120},
      {16, 108, 145, 110, 101, 61, 204, 131, 43, 85, 90, 116, 100},
  };
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    auto const& d = t.deltas[i];
    for (std::size_t c = 0; c < kLanguageCount; ++c) EXPECT_EQ(d.cells[c], deltas[i][c]);
    EXPECT_EQ(d.avg_high, deltas[i][10]) << d.model_id;
    EXPECT_EQ(d.avg_low, deltas[i][11]) << d.model_id;
    EXPECT_EQ(d.avg_all, deltas[i][12]) << d.model_id;
  }
}

TEST(DeltaTest, IdenticalRowsAllZero) {
  auto r = aggregate_table(row({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}), "a");
  auto d = delta_rows(r, r);
  for (auto c : d.cells) EXPECT_EQ(c, 0);
  EXPECT_EQ(d.avg_all, 0);
}

TEST(DeltaTest, AggregateRoundsExactDifference) {
  // Difference of the rounded means would give -1.6; the exact -1.54 gives -1.5.
  auto t = table1();
  EXPECT_EQ(t.rows[3].avg_high() - t.rows[2].avg_high(), -16);
  EXPECT_EQ(t.deltas[1].avg_high, -15);
}

TEST(RenderTest, TextTable) {
  auto text = render_score_table(table1());
  EXPECT_THAT(text, HasSubstr("Avg.H"));
  EXPECT_THAT(text, HasSubstr("delta vs LLaVA-7B"));
  EXPECT_THAT(text, HasSubstr("+28.2"));
  EXPECT_THAT(text, HasSubstr("46.9"));
}

TEST(RenderTest, CsvAndJson) {
  auto t = table1();
  auto csv = score_table_csv(t);
  EXPECT_THAT(csv, HasSubstr("row,kind,baseline,en,zh,fr,es,ru,ja,ar,hi,bn,ur,avg_high,avg_low,avg\n"));
  EXPECT_THAT(csv, HasSubstr("PALO-7B,delta,LLaVA-7B,-3.7,0.0,-4.1,-3.5,+2.1,-1.7,+18.9,+28.2,+37.8,+33.5,-1.8,+29.6,+10.8\n"));
  auto j = score_table_to_json(t);
  EXPECT_EQ(j["rows"][0]["avg"].dump(), "46.9");
  auto back = score_table_from_json(j);
  EXPECT_EQ(score_table_csv(back), csv);
}

TEST(RenderTest, SingleRowDocument) {
  auto t = score_table_from_json(parse_json(testing::read_fixture("table1_llava7b.json"), "x"));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0].avg_all(), 469);
  EXPECT_THROW(score_table_from_json(parse_json(R"({"rows": [], "deltas": [{"baseline": "a", "model": "b"}]})", "x")),
               UsageError);
}

std::vector<AblationRow> table2() {
  auto doc = parse_json(testing::read_fixture("table2.json"), "table2");
  auto inputs = ablation_inputs_from_json(doc);
  return ablation_matrix(inputs);
}

TEST(AblationTest, AllRowAverages) {
  auto rows = table2();
  ASSERT_EQ(rows.size(), 11u);
  std::vector<Tenths> expected{469, 387, 365, 418, 422, 379, 439, 380, 318, 309, 577};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].avg(), expected[i]) << rows[i].config;
  }
  EXPECT_EQ(rows[8].diagonal, Language::kBengali);
  EXPECT_FALSE(rows[10].diagonal);
}

TEST(AblationTest, CombinedMatchesPaloRow) {
  EXPECT_EQ(table2().back().avg(), table1().rows[1].avg_all());
}

TEST(AblationTest, SingleRow) {
  std::vector<AblationInput> in{{"flat", std::nullopt, row({500, 500, 500, 500, 500, 500, 500, 500, 500, 500})}};
  EXPECT_EQ(ablation_matrix(in)[0].avg(), 500);
}

TEST(AblationTest, InferLanguage) {
  EXPECT_EQ(infer_config_language("150K-Bengali"), Language::kBengali);
  EXPECT_EQ(infer_config_language("665K-english"), Language::kEnglish);
  EXPECT_FALSE(infer_config_language("Combined"));
  EXPECT_FALSE(infer_config_language("French+Spanish"));
}

TEST(AblationTest, RenderMarksDiagonal) {
  auto text = render_ablation(table2());
  EXPECT_THAT(text, HasSubstr("[34.8]"));
  EXPECT_THAT(text, HasSubstr("31.8"));
  auto j = ablation_to_json(table2());
  EXPECT_EQ(j["rows"][8]["diagonal"], "bn");
  EXPECT_EQ(j["rows"][8]["avg"].dump(), "31.8");
}

}  // namespace
}  // namespace palo_forge
