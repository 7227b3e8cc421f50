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

#include <array>
#include <atomic>
#include <regex>
#include <thread>
#include <tuple>
#include <variant>

#include "palo_forge/io.h"

namespace palo_forge {
namespace {

constexpr std::array<std::string_view, 3> kCategoryNames = {
    "conversation", "detail", "complex"};

std::string item_record_id(BenchmarkItem const& item) {
  return item.image_id + ":" + std::to_string(item.question_index);
}

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\n' ||
                        s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string_view trim(std::string_view s) {
  s = trim_right(s);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

IssueTag tag_for_flag(Flag f) {
  switch (f) {
    case Flag::kExcessLatin:
    case Flag::kScriptMismatch:
    case Flag::kEmptyTranslation:
      return IssueTag::kUntranslated;
    case Flag::kPlaceholderMismatch:
    case Flag::kLengthAnomaly:
      return IssueTag::kOther;
  }
  return IssueTag::kOther;
}

}  // namespace

std::string_view category_name(QuestionCategory c) {
  return kCategoryNames[static_cast<std::size_t>(c)];
}

std::optional<QuestionCategory> parse_category(std::string_view name) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == name) return static_cast<QuestionCategory>(i);
  }
  return std::nullopt;
}

std::vector<BenchmarkItem> parse_benchmark(std::string_view text) {
  std::vector<BenchmarkItem> items;
  for_each_line(text, [&](std::string_view line, std::size_t n) {
    auto where = "benchmark line " + std::to_string(n);
    auto j = parse_json(line, where);
    try {
      BenchmarkItem item;
      item.image_id = j.at("image_id").get<std::string>();
      item.question_index = j.at("question_index").get<int>();
      item.question = j.at("question").get<std::string>();
      item.reference_answer = j.at("reference_answer").get<std::string>();
      auto cat = j.at("category").get<std::string>();
      auto parsed = parse_category(cat);
      if (!parsed) {
        throw ValidationError(item_record_id(item), "unknown category '" + cat + "'");
      }
      item.category = *parsed;
      item.lang = language_from_code(j.value("lang", "en"));
      items.push_back(std::move(item));
    } catch (Json::exception const& e) {
      throw ValidationError("", "malformed benchmark item", where + ": " + e.what());
    }
  });
  return items;
}

std::string serialize_benchmark(std::span<BenchmarkItem const> items) {
  std::string out;
  for (auto const& item : items) {
    out += to_jsonl_line(Json{{"image_id", item.image_id},
                              {"question_index", item.question_index},
                              {"question", item.question},
                              {"reference_answer", item.reference_answer},
                              {"category", category_name(item.category)},
                              {"lang", code_of(item.lang)}});
  }
  return out;
}

BenchmarkShape benchmark_shape(std::span<BenchmarkItem const> items,
                               Language lang) {
  BenchmarkShape shape;
  std::set<std::string> images;
  std::set<std::pair<std::string, int>> questions;
  for (auto const& item : items) {
    if (item.lang != lang) continue;
    images.insert(item.image_id);
    questions.emplace(item.image_id, item.question_index);
    ++shape.categories[item.category];
  }
  shape.images = images.size();
  shape.questions = questions.size();
  return shape;
}

void check_benchmark_shape(std::span<BenchmarkItem const> items, Language lang) {
  std::size_t count = 0;
  for (auto const& item : items) count += item.lang == lang;
  if (count == 0) return;
  auto shape = benchmark_shape(items, lang);
  auto code = std::string(code_of(lang));
  if (shape.questions != count) {
    throw ValidationError(code, "duplicate benchmark question");
  }
  if (shape.images != kBenchmarkImages || shape.questions != kBenchmarkQuestions) {
    throw ValidationError(
        code, "benchmark shape",
        "benchmark for " + code + " has " + std::to_string(shape.images) +
            " images and " + std::to_string(shape.questions) +
            " questions; expected " + std::to_string(kBenchmarkImages) + " and " +
            std::to_string(kBenchmarkQuestions));
  }
}

bool lost_question_mark(std::string_view source, std::string_view translation) {
  source = trim_right(source);
  if (source.empty() || source.back() != '?') return false;
  translation = trim_right(translation);
  for (std::string_view mark : {"?", "\uFF1F", "\u061F"}) {
    if (translation.size() >= mark.size() &&
        translation.substr(translation.size() - mark.size()) == mark) {
      return false;
    }
  }
  return true;
}

BenchmarkTranslation translate_benchmark(std::span<BenchmarkItem const> english,
                                         std::span<Language const> languages,
                                         Backend& backend,
                                         TranslationOptions const& options,
                                         TranslationCache* cache,
                                         TranslationStats* stats) {
  for (auto const& item : english) {
    if (item.lang != Language::kEnglish) {
      throw UsageError("benchmark source items must be English");
    }
  }
  check_benchmark_shape(english, Language::kEnglish);

  BenchmarkTranslation out;
  out.items.assign(english.begin(), english.end());
  std::vector<std::string> problems;
  for (auto lang : languages) {
    if (lang == Language::kEnglish) continue;
    std::size_t produced = 0;
    for (auto const& item : english) {
      auto rid = item_record_id(item);
      try {
        auto q = translate_turn(rid, 0, item.question, lang, backend, options, {},
                                cache, stats);
        auto a = translate_turn(rid, 1, item.reference_answer, lang, backend,
                                options, {}, cache, stats);
        BenchmarkItem t = item;
        t.lang = lang;
        t.question = q.machine_text;
        t.reference_answer = a.machine_text;
        out.items.push_back(std::move(t));
        ++produced;

        for (auto* u : {&q, &a}) {
          ReviewQueueEntry entry;
          entry.unit = *u;
          for (auto f : u->report.flags) {
            entry.reasons.emplace_back(flag_name(f));
            entry.suggested_tags.insert(tag_for_flag(f));
          }
          if (u->turn_index == 0 &&
              lost_question_mark(u->source_text, u->machine_text)) {
            entry.reasons.emplace_back("question mark lost");
            entry.suggested_tags.insert(IssueTag::kPunctuation);
          }
          if (!entry.reasons.empty()) out.review_queue.push_back(std::move(entry));
        }
        out.units.push_back(std::move(q));
        out.units.push_back(std::move(a));
      } catch (BackendError const& e) {
        problems.push_back(rid + "@" + std::string(code_of(lang)) + ": " + e.what());
      }
    }
    if (produced != english.size()) {
      std::string msg = "benchmark for " + std::string(code_of(lang)) + " has " +
                        std::to_string(produced) + " items; expected " +
                        std::to_string(english.size());
      for (auto const& p : problems) msg += "\n  " + p;
      throw ValidationError(std::string(code_of(lang)), "benchmark count mismatch", msg);
    }
  }
  return out;
}

Json review_queue_to_json(std::span<ReviewQueueEntry const> queue) {
  auto out = Json::array();
  for (auto const& e : queue) {
    Json j;
    j["unit"] = unit_to_json(e.unit);
    j["reasons"] = e.reasons;
    auto tags = Json::array();
    for (auto t : e.suggested_tags) tags.push_back(issue_tag_name(t));
    j["suggested_tags"] = std::move(tags);
    out.push_back(std::move(j));
  }
  return out;
}

JudgeVerdict parse_judge_verdict(std::string_view text) {
  static std::regex const kLine(
      R"(^\s*Score-A:\s*(\d{1,2})\s+Score-B:\s*(\d{1,2})\s*$)");
  std::optional<JudgeVerdict> found;
  std::string rationale;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                              : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    std::string l(trim(line));
    std::smatch m;
    if (std::regex_match(l, m, kLine)) {
      if (found) throw JudgeParseError("judge reply has more than one score line");
      JudgeVerdict v;
      v.reference_score = std::stoi(m[1].str());
      v.candidate_score = std::stoi(m[2].str());
      if (v.reference_score < 1 || v.reference_score > 10 ||
          v.candidate_score < 1 || v.candidate_score > 10) {
        throw JudgeParseError("judge score outside 1..10: '" + l + "'");
      }
      found = v;
    } else if (l.find("Score-A") != std::string::npos ||
               l.find("Score-B") != std::string::npos) {
      throw JudgeParseError("malformed score line: '" + l + "'");
    } else if (!l.empty()) {
      if (!rationale.empty()) rationale += '\n';
      rationale += l;
    }
  }
  if (!found) {
    std::string head(text.substr(0, 80));
    throw JudgeParseError("judge reply has no score line: '" + head + "'");
  }
  found->rationale = std::move(rationale);
  return *found;
}

std::vector<ChatMessage> build_judge_prompt(std::string_view question,
                                            std::string_view reference,
                                            std::string_view candidate,
                                            Language lang) {
  std::string system =
      "You are a helpful and precise assistant for checking the quality of "
      "answers to questions about an image.";
  std::string user = "The question and answers are in " +
                     std::string(tag_of(lang).name) + ".\n\n[Question]\n" +
                     std::string(question) + "\n\n[Assistant A]\n" +
                     std::string(reference) + "\n\n[End of Assistant A]\n\n"
                     "[Assistant B]\n" + std::string(candidate) +
                     "\n\n[End of Assistant B]\n\n"
                     "Rate the helpfulness, relevance, accuracy and level of "
                     "detail of both answers on a scale of 1 to 10, where a "
                     "higher score means better performance. On the first line "
                     "write exactly:\nScore-A: <score> Score-B: <score>\n"
                     "Then give a short explanation.";
  return {{"system", std::move(system)}, {"user", std::move(user)}};
}

JudgeVerdict judge_pairwise(BenchmarkItem const& item,
                            std::string_view candidate_answer, Backend& judge,
                            std::string_view reference_override) {
  auto reference =
      reference_override.empty() ? std::string_view(item.reference_answer)
                                 : reference_override;
  auto prompt = build_judge_prompt(item.question, reference, candidate_answer,
                                   item.lang);
  for (int attempt = 0;; ++attempt) {
    try {
      return parse_judge_verdict(judge.complete(prompt));
    } catch (JudgeParseError const&) {
      if (attempt >= 1) throw;
    }
  }
}

std::vector<CandidateAnswer> parse_candidates(std::string_view text) {
  std::vector<CandidateAnswer> out;
  for_each_line(text, [&](std::string_view line, std::size_t n) {
    auto where = "candidate line " + std::to_string(n);
    auto j = parse_json(line, where);
    try {
      CandidateAnswer c;
      c.image_id = j.at("image_id").get<std::string>();
      c.question_index = j.at("question_index").get<int>();
      c.lang = language_from_code(j.at("lang").get<std::string>());
      c.answer = j.at("answer").get<std::string>();
      out.push_back(std::move(c));
    } catch (Json::exception const& e) {
      throw ValidationError("", "malformed candidate", where + ": " + e.what());
    }
  });
  return out;
}

JudgeReport run_judging(std::span<BenchmarkItem const> benchmark,
                        std::span<CandidateAnswer const> candidates,
                        Backend& judge, std::string model_id,
                        JudgeOptions const& options) {
  if (options.parallelism < 1) throw UsageError("parallelism must be >= 1");
  using Key = std::tuple<std::string, int, Language>;
  std::map<Key, std::string const*> answers;
  std::set<Language> langs;
  for (auto const& c : candidates) {
    if (!answers.emplace(Key{c.image_id, c.question_index, c.lang}, &c.answer).second) {
      throw UsageError("duplicate candidate answer for " + c.image_id + ":" +
                       std::to_string(c.question_index) + "@" +
                       std::string(code_of(c.lang)));
    }
    langs.insert(c.lang);
  }
  std::map<std::pair<std::string, int>, std::string const*> english_refs;
  for (auto const& item : benchmark) {
    if (item.lang == Language::kEnglish) {
      english_refs[{item.image_id, item.question_index}] = &item.reference_answer;
    }
  }

  std::vector<BenchmarkItem const*> work;
  for (auto const& item : benchmark) {
    if (langs.count(item.lang)) work.push_back(&item);
  }

  using Outcome = std::variant<JudgeVerdict, std::string>;
  std::vector<Outcome> slots(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      auto i = next.fetch_add(1);
      if (i >= work.size()) return;
      auto const& item = *work[i];
      auto where = item_record_id(item) + "@" + std::string(code_of(item.lang));
      auto it = answers.find(Key{item.image_id, item.question_index, item.lang});
      if (it == answers.end()) {
        slots[i] = where + ": no candidate answer";
        continue;
      }
      std::string_view reference;
      if (options.reference == ReferenceSource::kEnglish) {
        auto ref = english_refs.find({item.image_id, item.question_index});
        if (ref == english_refs.end()) {
          slots[i] = where + ": no English reference";
          continue;
        }
        reference = *ref->second;
      }
      try {
        slots[i] = judge_pairwise(item, *it->second, judge, reference);
      } catch (JudgeParseError const& e) {
        slots[i] = where + ": " + e.what();
      } catch (BackendError const& e) {
        slots[i] = where + ": " + e.what();
      }
    }
  };
  if (options.parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < options.parallelism; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  JudgeReport report;
  report.model_id = std::move(model_id);
  for (auto lang : langs) report.languages[lang];
  for (std::size_t i = 0; i < work.size(); ++i) {
    auto& lj = report.languages[work[i]->lang];
    ++lj.attempted;
    if (auto* v = std::get_if<JudgeVerdict>(&slots[i])) {
      lj.verdicts.push_back(*v);
    } else {
      ++lj.failures;
      lj.failure_messages.push_back(std::get<std::string>(slots[i]));
    }
  }
  for (auto& [lang, lj] : report.languages) {
    auto code = std::string(code_of(lang));
    if (!lj.verdicts.empty()) lj.score = score_language(lj.verdicts);
    if (lj.failures > 0) {
      report.warnings.push_back(code + ": " + std::to_string(lj.failures) + " of " +
                                std::to_string(lj.attempted) +
                                " judgments failed and were excluded (n=" +
                                std::to_string(lj.n()) + ")");
    }
    if (lj.attempted == 0) {
      report.warnings.push_back(code + ": answers given but no benchmark items");
    }
  }
  return report;
}

Json judge_report_to_json(JudgeReport const& report) {
  Json j;
  j["model_id"] = report.model_id;
  auto langs = Json::object();
  for (auto const& [lang, lj] : report.languages) {
    Json l;
    l["score"] = lj.score ? tenths_to_json(*lj.score) : Json(nullptr);
    l["n"] = lj.n();
    l["attempted"] = lj.attempted;
    l["failures"] = lj.failures;
    std::int64_t ref = 0, cand = 0;
    for (auto const& v : lj.verdicts) {
      ref += v.reference_score;
      cand += v.candidate_score;
    }
    l["sum_reference"] = ref;
    l["sum_candidate"] = cand;
    l["failure_messages"] = lj.failure_messages;
    langs[std::string(code_of(lang))] = std::move(l);
  }
  j["languages"] = std::move(langs);
  j["warnings"] = report.warnings;
  return j;
}

}  // namespace palo_forge
