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

// End-to-end acceptance checks. Usage: acceptance [criterion...]
// Prints one "PASS name: ..." or "FAIL name: ..." line per criterion and
// exits non-zero if any failed.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "palo_forge/benchmark.h"
#include "palo_forge/corrections.h"
#include "palo_forge/dataset.h"
#include "palo_forge/io.h"
#include "palo_forge/json.h"
#include "palo_forge/llm_backend.h"
#include "palo_forge/mass_translation.h"
#include "palo_forge/review_store.h"
#include "palo_forge/sampling.h"
#include "palo_forge/scoring.h"
#include "palo_forge/script.h"
#include "palo_forge/translation.h"
#include "test_util.h"

namespace palo_forge {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> problems;
  std::string summary;

  void check(bool ok, std::string const& what) {
    if (!ok) {
      pass = false;
      problems.push_back(what);
    }
  }
};

Json published() { return parse_json(testing::read_fixture("published_tables.json"), "fixture"); }

void within(Outcome& o, Clock::time_point start, double budget_s) {
  double s = std::chrono::duration<double>(Clock::now() - start).count();
  std::ostringstream os;
  os.precision(3);
  os << s << " s";
  o.summary += (o.summary.empty() ? "" : ", ") + os.str();
  o.check(s < budget_s, "runtime " + os.str() + " over budget");
}

void compare_cell(Outcome& o, std::string const& where, Tenths got, std::string const& want,
                  bool signed_plus, int& matched) {
  std::string g = format_tenths(got, signed_plus);
  if (g == want) {
    ++matched;
  } else {
    o.check(false, where + " computed " + g + ", published " + want);
  }
}

Outcome table1() {
  auto start = Clock::now();
  Outcome o;
  auto table = score_table_from_json(parse_json(testing::read_fixture("table1.json"), "fixture"));
  auto pub = published()["table1"];
  int matched = 0;
  int total = 0;
  for (auto const& row : table.rows) {
    auto const& want = pub["rows"].at(row.model_id);
    compare_cell(o, row.model_id + " Avg.H", row.avg_high(), want["avg_high"], false, matched);
    compare_cell(o, row.model_id + " Avg.L", row.avg_low(), want["avg_low"], false, matched);
    compare_cell(o, row.model_id + " Avg", row.avg_all(), want["avg"], false, matched);
    total += 3;
  }
  for (auto const& d : table.deltas) {
    auto const& want = pub["deltas"].at(d.model_id);
    for (std::size_t i = 0; i < kLanguageCount; ++i) {
      auto code = std::string(code_of(static_cast<Language>(i)));
      compare_cell(o, d.model_id + " delta " + code, d.cells[i], want[i], true, matched);
    }
    compare_cell(o, d.model_id + " delta Avg.H", d.avg_high, want[10], true, matched);
    compare_cell(o, d.model_id + " delta Avg.L", d.avg_low, want[11], true, matched);
    compare_cell(o, d.model_id + " delta Avg", d.avg_all, want[12], true, matched);
    total += 13;
  }
  o.check(table.rows.size() == 6 && table.deltas.size() == 3, "expected 6 rows and 3 deltas");
  o.summary = std::to_string(matched) + "/" + std::to_string(total) + " cells match";
  within(o, start, 1.0);
  return o;
}

Outcome table2() {
  auto start = Clock::now();
  Outcome o;
  auto inputs =
      ablation_inputs_from_json(parse_json(testing::read_fixture("table2.json"), "fixture"));
  auto rows = ablation_matrix(inputs);
  auto want = published()["table2"]["averages"];
  int matched = 0;
  for (auto const& r : rows) {
    compare_cell(o, r.config + " Avg", r.avg(), want.at(r.config), false, matched);
  }
  o.check(rows.size() == 11, "expected 11 rows");
  o.summary = std::to_string(matched) + "/" + std::to_string(rows.size()) + " averages match";
  within(o, start, 1.0);
  return o;
}

Outcome mix_plan() {
  Outcome o;
  auto langs = translated_languages();
  auto plan = plan_dataset_mix(665'000, 150'000, langs);
  o.check(plan.total == 2'015'000, "total " + std::to_string(plan.total));
  o.check(plan.count_for(Language::kEnglish) == 665'000, "English bucket");
  for (auto lang : langs) o.check(plan.count_for(lang) == 150'000, "bucket " + std::string(code_of(lang)));
  // Just under 2.1M.
  o.check(plan.total > 2'000'000 && plan.total < 2'100'000, "not almost 2.1M");
  auto bn = plan_dataset_mix(665'000, 150'000, langs, {{Language::kBengali, 222'000}});
  o.check(bn.count_for(Language::kBengali) == 222'000, "Bengali override");
  o.check(bn.total == 2'087'000, "override total " + std::to_string(bn.total));
  o.summary = "total " + std::to_string(plan.total) + ", with Bengali 222K " + std::to_string(bn.total);
  return o;
}

Outcome rule_properties() {
  auto start = Clock::now();
  Outcome o;
  constexpr int kPerLanguage = 10'000;
  std::int64_t violations = 0;
  auto note = [&](std::string const& what) {
    if (++violations <= 5) o.problems.push_back(what);
  };
  std::uint64_t seed = 1;
  for (auto lang : all_languages()) {
    if (lang == Language::kEnglish) continue;
    testing::TextGenerator gen(seed++);
    for (int i = 0; i < kPerLanguage; ++i) {
      auto text = gen.next(60);
      auto once = apply_corrections(text, lang).corrected;
      if (apply_corrections(once, lang).corrected != once) {
        note(std::string(code_of(lang)) + " not idempotent on " + Json(text).dump());
      }
      if (count_placeholders(once) != count_placeholders(text)) {
        note(std::string(code_of(lang)) + " placeholder count changed on " + Json(text).dump());
      }
      auto runs = classify_script_runs(once);
      std::size_t pos = 0;
      bool ok = true;
      for (std::size_t r = 0; r < runs.size(); ++r) {
        ok = ok && runs[r].start == pos && runs[r].end > runs[r].start &&
             (r == 0 || runs[r].script != runs[r - 1].script);
        pos = runs[r].end;
      }
      ok = ok && pos == decode_utf8(once).size();
      if (!ok) note(std::string(code_of(lang)) + " bad script partition on " + Json(once).dump());
    }
  }
  o.pass = violations == 0;
  o.summary = std::to_string(violations) + " violations over " +
              std::to_string(kPerLanguage) + " strings x 9 languages";
  within(o, start, 30.0);
  return o;
}

std::vector<InstructionRecord> records50() {
  return parse_instruct_dataset(testing::read_fixture("records50.json")).records;
}

struct PipelineRun {
  std::string bytes;
  std::int64_t records = 0;
  std::vector<std::string> sample;
  std::size_t edited = 0;
  std::size_t merged_changes = 0;
  std::size_t examples = 0;
  std::size_t turns_in_sample = 0;
  ProgressReport progress;
};

// Review, merge and export over a finished translation run.
PipelineRun finish_pipeline(MassTranslationResult const& result,
                            std::filesystem::path const& work) {
  PipelineRun run;
  auto const lang = Language::kHindi;
  for (auto const& [l, ds] : result.datasets) run.records += static_cast<std::int64_t>(ds.size());

  auto const& hi = result.datasets.at(lang);
  run.sample = sample_for_review(hi, 10, 42);

  std::vector<TranslationUnit> hi_units;
  for (auto const& u : result.units) {
    if (u.lang == lang) hi_units.push_back(u);
  }
  std::vector<UnitKey> keys;
  for (auto const& id : run.sample) {
    for (auto const& u : hi_units) {
      if (u.record_id == id) keys.push_back(u.key());
    }
  }
  run.turns_in_sample = keys.size();

  std::filesystem::remove(work / "review.log");
  ReviewStore store(hi_units, work / "review.log");
  auto session = store.create_session(lang, "reviewer-1", keys);
  for (;;) {
    auto next = store.next_unit(session.session_id);
    if (next.done) break;
    auto const& u = *next.unit;
    CorrectionSubmission sub;
    sub.key = u.key();
    sub.corrected_text = u.machine_text;
    // One scripted edit per sampled record; every other turn is accepted as is.
    if (u.turn_index == 1) {
      sub.corrected_text = u.machine_text + " (संशोधित)";
      sub.issue_tags = {IssueTag::kGrammar};
      ++run.edited;
    }
    store.submit_correction(session.session_id, sub);
  }
  run.progress = store.progress_report(lang);

  auto units = store.units();
  auto merged = merge_corrections(hi, units, lang);
  for (std::size_t r = 0; r < hi.size(); ++r) {
    for (std::size_t t = 0; t < hi[r].turns.size(); ++t) {
      if (hi[r].turns[t].text != merged[r].turns[t].text) ++run.merged_changes;
    }
  }
  std::vector<TranslationUnit> reviewed;
  for (auto const& u : units) {
    if (u.reviewed()) reviewed.push_back(u);
  }
  auto corpus = export_finetune_corpus(reviewed, lang);
  for (char c : corpus) run.examples += c == '\n';

  SerializeOptions lenient{.lenient = true};
  // Call counts differ after a resume; the outputs may not.
  std::string bytes = summary_to_json(result)["languages"].dump() + "\n";
  for (auto const& [l, ds] : result.datasets) bytes += serialize_instruct_dataset(ds, lenient);
  bytes += serialize_unit_ledger(result.units);
  bytes += serialize_unit_ledger(units);
  bytes += serialize_instruct_dataset(merged, lenient);
  bytes += corpus;
  run.bytes = std::move(bytes);
  return run;
}

Outcome mock_e2e() {
  auto start = Clock::now();
  Outcome o;
  testing::TempDir dir;
  auto records = records50();
  auto langs = translated_languages();
  std::vector<std::string> const expected_sample{"rec002", "rec003", "rec006", "rec012", "rec028",
                                                 "rec032", "rec038", "rec039", "rec046", "rec049"};

  MockBackend first_backend(BackendKind::kTranslator);
  auto first = run_mass_translation(records, langs, first_backend);
  auto a = finish_pipeline(first, dir.path());
  o.check(a.records == 450, "translated " + std::to_string(a.records) + " records");
  o.check(a.sample == expected_sample, "review sample differs");
  o.check(a.edited == 10, "edited " + std::to_string(a.edited));
  o.check(a.merged_changes == 10, "merge changed " + std::to_string(a.merged_changes) + " turns");
  o.check(a.examples == 10 * 4 && a.examples == a.turns_in_sample,
          "exported " + std::to_string(a.examples) + " examples");
  o.check(a.progress.reviewed == 40 && a.progress.remaining == 0, "review progress");
  o.check(a.progress.tag_histogram[IssueTag::kGrammar] == 10, "tag histogram");

  MockBackend again_backend(BackendKind::kTranslator);
  auto again = run_mass_translation(records, langs, again_backend);
  auto b = finish_pipeline(again, dir.path());
  o.check(a.bytes == b.bytes, "rerun not byte-identical");

  // Kill a child process mid-run with SIGKILL, then resume from its checkpoint.
  MassTranslationOptions opts;
  opts.checkpoint_path = dir / "checkpoint.json";
  opts.checkpoint_every = 5;
  opts.parallelism = 4;
  pid_t pid = ::fork();
  if (pid == 0) {
    auto mock = std::make_shared<MockBackend>(BackendKind::kTranslator);
    auto n = std::make_shared<std::atomic<int>>(0);
    ScriptedBackend dying("mock", [mock, n](std::span<ChatMessage const> m) {
      if (++*n == 500) ::raise(SIGKILL);
      return mock->complete(m);
    });
    run_mass_translation(records, langs, dying, opts);
    ::_exit(0);
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  bool killed = WIFSIGNALED(status) && WTERMSIG(status) == SIGKILL;
  o.check(killed, "child was not killed");
  MockBackend resume_backend(BackendKind::kTranslator);
  auto resumed = run_mass_translation(records, langs, resume_backend, opts);
  o.check(resumed.resumed > 0, "nothing resumed from the checkpoint");
  o.check(resumed.backend_calls < first.backend_calls, "resume re-sent every request");
  auto c = finish_pipeline(resumed, dir.path());
  o.check(a.bytes == c.bytes, "kill-and-resume not byte-identical");

  o.summary = std::to_string(a.records) + " records, sample " + std::to_string(a.sample.size()) +
              ", " + std::to_string(a.examples) + " examples, resumed " +
              std::to_string(resumed.resumed) + " pairs";
  within(o, start, 60.0);
  return o;
}

Outcome judge() {
  auto start = Clock::now();
  Outcome o;
  auto bench = parse_benchmark(testing::read_fixture("bench_en.jsonl"));
  bench.resize(2);
  std::vector<CandidateAnswer> answers;
  for (auto const& i : bench) answers.push_back({i.image_id, i.question_index, i.lang, "answer"});
  auto scripted = ScriptedBackend::sequence("judge", {"Score-A: 8 Score-B: 6", "Score-A: 8 Score-B: 8"});
  auto report = run_judging(bench, answers, *scripted, "candidate");
  Tenths score = report.languages.at(Language::kEnglish).score.value_or(-1);
  o.check(format_tenths(score) == "87.5", "score " + format_tenths(score));

  auto garbage = ScriptedBackend::sequence("judge", {"great answer!"});
  auto failed = run_judging(bench, answers, *garbage, "candidate");
  auto const& lj = failed.languages.at(Language::kEnglish);
  o.check(lj.failures == 2 && lj.n() == 0, "parse failures not counted");
  o.check(!lj.failure_messages.empty(), "parse failure not recorded");
  o.check(!failed.warnings.empty(), "parse failure not surfaced");
  auto j = judge_report_to_json(failed);
  o.check(j["languages"]["en"]["failures"] == 2, "failures missing from report");
  o.summary = "score " + format_tenths(score) + ", " +
              (failed.warnings.empty() ? std::string("no warning") : failed.warnings[0]);
  within(o, start, 1.0);
  return o;
}

Outcome bench_shape() {
  Outcome o;
  auto en = parse_benchmark(testing::read_fixture("bench_en.jsonl"));
  MockBackend mock(BackendKind::kTranslator);
  auto langs = translated_languages();
  auto out = translate_benchmark(en, langs, mock);
  std::size_t ok = 0;
  for (auto lang : all_languages()) {
    auto s = benchmark_shape(out.items, lang);
    bool good = s.images == 24 && s.questions == 60;
    o.check(good, std::string(code_of(lang)) + " has " + std::to_string(s.images) + " images, " +
                      std::to_string(s.questions) + " questions");
    ok += good;
  }
  o.summary = std::to_string(ok) + "/10 languages at 24 images, 60 questions";
  return o;
}

}  // namespace
}  // namespace palo_forge

int main(int argc, char** argv) {
  using namespace palo_forge;
  std::vector<std::pair<std::string, std::function<Outcome()>>> const criteria{
      {"table1", table1},       {"table2", table2}, {"mix_plan", mix_plan},
      {"rule_properties", rule_properties},         {"mock_e2e", mock_e2e},
      {"judge", judge},         {"benchmark_shape", bench_shape},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  if (wanted.empty()) {
    for (auto const& [name, fn] : criteria) wanted.push_back(name);
  }
  int failures = 0;
  for (auto const& name : wanted) {
    auto it = std::find_if(criteria.begin(), criteria.end(),
                           [&](auto const& c) { return c.first == name; });
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << name << "\n";
      return 2;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (std::exception const& e) {
      o.pass = false;
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.summary << "\n";
    for (auto const& p : o.problems) std::cout << "  " << p << "\n";
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
