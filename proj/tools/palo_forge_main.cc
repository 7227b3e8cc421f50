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

// palo-forge: command line entry point.
//
// Exit codes: 0 success, 1 validation or processing failure, 2 usage or
// configuration error, 130 interrupted.

#include <csignal>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "palo_forge/benchmark.h"
#include "palo_forge/checkpoint.h"
#include "palo_forge/corrections.h"
#include "palo_forge/dataset.h"
#include "palo_forge/errors.h"
#include "palo_forge/io.h"
#include "palo_forge/json.h"
#include "palo_forge/llm_backend.h"
#include "palo_forge/mass_translation.h"
#include "palo_forge/review_server.h"
#include "palo_forge/review_store.h"
#include "palo_forge/run_config.h"
#include "palo_forge/sampling.h"
#include "palo_forge/scoring.h"
#include "palo_forge/translation.h"

namespace fs = std::filesystem;
using namespace palo_forge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInterrupted = 130;

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop.store(true); }

struct Globals {
  std::string config_path;
  bool print_config = false;
  bool json = false;
};

std::string const& require(std::string const& value, char const* what) {
  if (value.empty()) throw UsageError(std::string("--") + what + " is required");
  return value;
}

fs::path existing_file(std::string const& value, char const* what) {
  require(value, what);
  if (!fs::is_regular_file(value)) {
    throw UsageError(std::string(what) + " '" + value + "' does not exist");
  }
  return value;
}

Language single_language(RunConfig const& c) {
  auto lang = language_from_code(require(c.lang, "lang"));
  return lang;
}

std::vector<Language> target_languages(RunConfig const& c) {
  auto langs = parse_language_list(c.langs);
  for (auto l : langs) {
    if (l == Language::kEnglish) throw UsageError("English is the source language");
  }
  return langs;
}

void emit(std::string const& path, std::string const& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
  } else {
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) {
      fs::create_directories(parent);
    }
    write_file_atomic(path, contents);
  }
}

// A backend plus the retry wrapper that fronts it.
class BackendHandle {
 public:
  BackendHandle(RunConfig const& c, std::string const& id, BackendKind kind) {
    if (id == "mock") {
      inner_ = std::make_unique<MockBackend>(kind, "mock");
    } else {
      auto descriptors = load_backend_config(existing_file(c.backends, "backends"));
      auto it = std::find_if(descriptors.begin(), descriptors.end(),
                             [&](auto const& d) { return d.backend_id == id; });
      if (it == descriptors.end()) {
        throw ConfigError("backend '" + id + "' is not in " + c.backends);
      }
      if (it->kind != kind) {
        throw ConfigError("backend '" + id + "' has the wrong kind");
      }
      inner_ = make_backend(*it);
    }
    RetryPolicy policy;
    policy.max_attempts = c.max_attempts;
    retrying_ = std::make_unique<RetryingBackend>(*inner_, policy);
  }

  Backend& get() { return *retrying_; }

 private:
  std::unique_ptr<Backend> inner_;
  std::unique_ptr<RetryingBackend> retrying_;
};

std::optional<RuleSet> load_rules(RunConfig const& c) {
  if (c.rules.empty()) return std::nullopt;
  return RuleSet::load(existing_file(c.rules, "rules"));
}

std::vector<InstructionRecord> load_dataset(RunConfig const& c,
                                            std::string const& path) {
  ParseOptions opts;
  opts.lenient = c.lenient;
  auto parsed = parse_instruct_dataset(read_file(existing_file(path, "dataset")), opts);
  for (auto const& w : parsed.warnings) {
    std::cerr << "warning: record '" << w.record_id << "': " << w.rule << "\n";
  }
  return std::move(parsed.records);
}

std::vector<TranslationUnit> load_units(RunConfig const& c) {
  auto units = parse_unit_ledger(read_file(existing_file(c.ledger, "ledger")));
  if (c.review_log.empty()) return units;
  ReviewStore store(std::move(units), c.review_log);
  return store.units();
}

// --- subcommands -----------------------------------------------------------

int cmd_validate(RunConfig const& c, Globals const& g) {
  ParseOptions opts;
  opts.lenient = true;
  auto parsed = parse_instruct_dataset(read_file(existing_file(c.dataset, "dataset")), opts);
  for (auto const& w : parsed.warnings) {
    std::cerr << "record '" << w.record_id << "': " << w.rule << "\n";
  }
  if (g.json) {
    auto violations = Json::array();
    for (auto const& w : parsed.warnings) {
      violations.push_back(Json{{"record_id", w.record_id}, {"rule", w.rule}});
    }
    std::cout << Json{{"records", parsed.records.size()},
                      {"violations", std::move(violations)}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << parsed.records.size() << " records, " << parsed.warnings.size()
              << " violations\n";
  }
  return parsed.warnings.empty() || c.lenient ? kExitOk : kExitFailure;
}

int cmd_translate(RunConfig const& c, Globals const& g) {
  auto records = load_dataset(c, c.dataset);
  auto langs = target_languages(c);
  BackendHandle backend(c, c.backend, BackendKind::kTranslator);
  auto rules = load_rules(c);

  fs::path out = c.output.empty() ? fs::path("out") : fs::path(c.output);
  fs::create_directories(out);
  MassTranslationOptions opts;
  opts.parallelism = c.parallelism;
  opts.checkpoint_every = c.checkpoint_every;
  opts.checkpoint_path = c.checkpoint.empty() ? out / "checkpoint.json" : fs::path(c.checkpoint);
  opts.translation.rules = rules ? &*rules : nullptr;
  opts.translation.thresholds = c.thresholds;
  opts.translation.include_context = c.include_context;
  opts.stop = &g_stop;

  auto result = run_mass_translation(records, langs, backend.get(), opts);
  if (result.interrupted) {
    std::cerr << "interrupted; checkpoint saved to " << opts.checkpoint_path.string()
              << "\n";
    return kExitInterrupted;
  }
  for (auto lang : langs) {
    auto const& ds = result.datasets[lang];
    write_file_atomic(out / (std::string(code_of(lang)) + ".json"),
                      serialize_instruct_dataset(ds, SerializeOptions{.lenient = true}));
  }
  write_file_atomic(out / "units.jsonl", serialize_unit_ledger(result.units));
  auto summary = summary_to_json(result);
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");

  std::int64_t failed = 0;
  for (auto lang : langs) {
    auto const& s = result.summary[lang];
    failed += s.failed;
    std::cerr << code_of(lang) << ": " << s.translated << " translated, "
              << s.flagged << " flagged, " << s.failed << " failed\n";
  }
  std::cerr << "backend calls: " << result.backend_calls
            << ", cache hits: " << result.cache_hits << "\n";
  for (auto const& f : result.failures) {
    std::cerr << "failed " << f.key.to_string() << ": " << f.message << "\n";
  }
  if (g.json) std::cout << summary.dump(2) << "\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_sample(RunConfig const& c, Globals const&) {
  auto records = load_dataset(c, c.dataset);
  auto lang = single_language(c);
  std::optional<std::vector<TranslationUnit>> units;
  if (!c.ledger.empty()) units = load_units(c);

  std::vector<std::string> ids;
  auto n = static_cast<std::size_t>(c.sample_size);
  if (c.stratify) {
    if (!units) throw UsageError("--stratify needs --ledger");
    std::set<std::string, std::less<>> flagged;
    for (auto const& u : *units) {
      if (u.lang == lang && !u.report.clean()) flagged.insert(u.record_id);
    }
    ids = sample_for_review_stratified(records, flagged, n, c.seed);
  } else {
    ids = sample_for_review(records, n, c.seed);
  }

  Json doc;
  doc["lang"] = code_of(lang);
  doc["seed"] = c.seed;
  doc["n"] = ids.size();
  doc["record_ids"] = ids;
  if (units) {
    std::set<std::string> chosen(ids.begin(), ids.end());
    auto keys = Json::array();
    for (auto const& u : *units) {
      if (u.lang == lang && chosen.count(u.record_id)) keys.push_back(key_to_json(u.key()));
    }
    doc["keys"] = std::move(keys);
  }
  emit(c.output, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_serve(RunConfig const& c, Globals const&) {
  auto units = parse_unit_ledger(read_file(existing_file(c.ledger, "ledger")));
  ReviewStore store(std::move(units), require(c.review_log, "review-log"));
  std::optional<fs::path> ui;
  if (!c.ui_dir.empty()) ui = fs::path(c.ui_dir);
  ReviewServer server(store, ui);
  auto addr = parse_listen_address(c.listen);
  int port = server.bind(addr);
  std::cerr << "review service listening on http://" << addr.host << ":" << port
            << "\n";
  server.start();
  while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  std::cerr << "review service stopped\n";
  return kExitOk;
}

int cmd_merge(RunConfig const& c, Globals const& g) {
  auto records = load_dataset(c, c.dataset);
  auto lang = single_language(c);
  auto units = load_units(c);
  auto merged = merge_corrections(records, units, lang);
  std::size_t applied = 0;
  for (auto const& u : units) applied += u.lang == lang && u.reviewed();
  emit(c.output, serialize_instruct_dataset(merged, SerializeOptions{.lenient = true}));
  std::cerr << "merged " << applied << " corrections\n";
  if (g.json && !c.output.empty()) {
    std::cout << Json{{"lang", code_of(lang)}, {"applied", applied}}.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_export(RunConfig const& c, Globals const& g) {
  auto lang = single_language(c);
  std::vector<TranslationUnit> selected;
  for (auto& u : load_units(c)) {
    if (u.lang == lang && u.reviewed()) selected.push_back(std::move(u));
  }
  emit(c.output, export_finetune_corpus(selected, lang));
  std::cerr << "exported " << selected.size() << " examples\n";
  if (g.json && !c.output.empty()) {
    std::cout << Json{{"lang", code_of(lang)}, {"examples", selected.size()}}.dump(2)
              << "\n";
  }
  return kExitOk;
}

int cmd_bench_translate(RunConfig const& c, Globals const& g) {
  auto text = read_file(existing_file(c.benchmark, "benchmark"));
  auto english = parse_benchmark(text);
  auto langs = target_languages(c);
  BackendHandle backend(c, c.backend, BackendKind::kTranslator);
  auto rules = load_rules(c);
  TranslationOptions opts;
  opts.rules = rules ? &*rules : nullptr;
  opts.thresholds = c.thresholds;

  fs::path out = c.output.empty() ? fs::path("bench") : fs::path(c.output);
  fs::create_directories(out);
  fs::path cp_path = c.checkpoint.empty() ? out / "checkpoint.json" : fs::path(c.checkpoint);
  auto checkpoint = Checkpoint::open(cp_path, sha256_hex(text));
  TranslationStats stats;
  auto result = translate_benchmark(english, langs, backend.get(), opts, &checkpoint, &stats);
  checkpoint.save(cp_path);

  write_file_atomic(out / "benchmark.jsonl", serialize_benchmark(result.items));
  write_file_atomic(out / "units.jsonl", serialize_unit_ledger(result.units));
  write_file_atomic(out / "review_queue.json",
                    review_queue_to_json(result.review_queue).dump(2) + "\n");
  Json manifest;
  manifest["final"] = result.final();
  manifest["review_queue"] = result.review_queue.size();
  auto shapes = Json::object();
  std::vector<Language> all{Language::kEnglish};
  all.insert(all.end(), langs.begin(), langs.end());
  for (auto lang : all) {
    auto shape = benchmark_shape(result.items, lang);
    auto cats = Json::object();
    for (auto [cat, n] : shape.categories) cats[std::string(category_name(cat))] = n;
    shapes[std::string(code_of(lang))] =
        Json{{"images", shape.images}, {"questions", shape.questions},
             {"categories", std::move(cats)}};
  }
  manifest["languages"] = std::move(shapes);
  write_file_atomic(out / "manifest.json", manifest.dump(2) + "\n");

  std::cerr << "translated " << result.items.size() - english.size()
            << " items; " << result.review_queue.size() << " queued for review"
            << (result.final() ? "; benchmark is final" : "; benchmark is not final")
            << "\n";
  if (g.json) std::cout << manifest.dump(2) << "\n";
  return kExitOk;
}

int cmd_score(RunConfig const& c, Globals const& g) {
  auto bench = parse_benchmark(read_file(existing_file(c.benchmark, "benchmark")));
  auto cands = parse_candidates(read_file(existing_file(c.candidates, "candidates")));
  BackendHandle judge(c, c.judge, BackendKind::kJudge);
  JudgeOptions opts;
  opts.parallelism = c.parallelism;
  opts.reference =
      c.reference == "english" ? ReferenceSource::kEnglish : ReferenceSource::kTargetLanguage;
  auto report = run_judging(bench, cands, judge.get(), c.model_id, opts);

  auto doc = judge_report_to_json(report);
  auto scores = Json::object();
  for (auto const& [lang, lj] : report.languages) {
    if (lj.score) scores[std::string(code_of(lang))] = tenths_to_json(*lj.score);
  }
  doc["scores"] = std::move(scores);
  for (auto const& [lang, lj] : report.languages) {
    std::cerr << code_of(lang) << ": "
              << (lj.score ? format_tenths(*lj.score) : std::string("n/a"))
              << " (n=" << lj.n() << ")\n";
  }
  for (auto const& w : report.warnings) std::cerr << "warning: " << w << "\n";
  if (!c.output.empty()) {
    emit(c.output, doc.dump(2) + "\n");
    if (g.json) std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_aggregate(RunConfig const& c, Globals const& g) {
  auto doc = parse_json(read_file(existing_file(c.scores, "scores")), "scores");
  auto table = score_table_from_json(doc);
  if (!c.output.empty()) {
    auto ext = fs::path(c.output).extension();
    emit(c.output, ext == ".json" ? score_table_to_json(table).dump(2) + "\n"
                                  : score_table_csv(table));
  }
  if (g.json) {
    std::cout << score_table_to_json(table).dump(2) << "\n";
  } else {
    std::cout << render_score_table(table);
  }
  return kExitOk;
}

int cmd_ablate(RunConfig const& c, Globals const& g) {
  auto doc = parse_json(read_file(existing_file(c.scores, "scores")), "ablation runs");
  auto inputs = ablation_inputs_from_json(doc);
  auto rows = ablation_matrix(inputs);
  if (!c.output.empty()) emit(c.output, ablation_to_json(rows).dump(2) + "\n");
  if (g.json) {
    std::cout << ablation_to_json(rows).dump(2) << "\n";
  } else {
    std::cout << render_ablation(rows);
  }
  return kExitOk;
}

int run_guarded(std::function<int()> const& fn) {
  try {
    return fn();
  } catch (UsageError const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (ConfigError const& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (DanglingReferenceError const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (ValidationError const& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitFailure;
  } catch (ParseError const& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitFailure;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"palo-forge: multilingual instruction data and evaluation toolkit"};
  app.require_subcommand(0, 1);

  Globals g;
  app.add_option("--config", g.config_path, "JSON config file (env PALO_FORGE_CONFIG)");
  app.add_flag("--print-config", g.print_config, "print the resolved configuration and exit");
  app.add_flag("--json", g.json, "emit a machine-readable summary on stdout");

  std::map<std::string, std::string> extra_names = {
      {"dataset", "--in"}, {"output", "--out,-o"}, {"sample_size", "-n"}};
  std::map<std::string, std::string> raw;
  std::map<std::string, bool> raw_flags;
  std::map<std::string, CLI::Option*> opts;
  for (auto const& f : config_fields()) {
    std::string names = "--" + option_name(f.name);
    if (auto it = extra_names.find(f.name); it != extra_names.end()) {
      names += "," + it->second;
    }
    if (f.is_flag) {
      opts[f.name] = app.add_flag(names, raw_flags[f.name], f.help);
    } else {
      opts[f.name] = app.add_option(names, raw[f.name], f.help);
    }
  }

  struct Sub {
    char const* name;
    char const* help;
    int (*fn)(RunConfig const&, Globals const&);
  };
  std::vector<Sub> subs = {
      {"validate", "check an instruction dataset against the record invariants", cmd_validate},
      {"translate", "translate a dataset into the target languages", cmd_translate},
      {"sample-review", "draw the review sample for one language", cmd_sample},
      {"serve-review", "serve the review API (and UI bundle)", cmd_serve},
      {"merge", "merge reviewed corrections into a translated dataset", cmd_merge},
      {"export-finetune", "export reviewed units as a translator fine-tune corpus", cmd_export},
      {"bench-translate", "translate the English benchmark", cmd_bench_translate},
      {"score", "judge candidate answers and score each language", cmd_score},
      {"aggregate", "compute score table averages and deltas", cmd_aggregate},
      {"ablate", "compute the fine-tuning ablation matrix", cmd_ablate},
  };
  std::string positional;
  std::map<std::string, CLI::App*> commands;
  for (auto const& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    commands[s.name] = sub;
  }
  commands["validate"]->add_option("path", positional, "dataset file");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return kExitUsage;
  }

  return run_guarded([&]() -> int {
    std::map<std::string, std::string> flags;
    for (auto const& f : config_fields()) {
      if (opts[f.name]->count() == 0) continue;
      flags[f.name] = f.is_flag ? (raw_flags[f.name] ? "true" : "false") : raw[f.name];
    }
    if (!positional.empty()) flags["dataset"] = positional;
    std::string config_path = g.config_path;
    if (config_path.empty()) {
      if (auto env = system_env("PALO_FORGE_CONFIG")) config_path = *env;
    }
    std::optional<std::string> config_doc;
    if (!config_path.empty()) config_doc = read_file(existing_file(config_path, "config"));
    auto config = resolve_config(config_doc, system_env, flags);

    if (g.print_config) {
      std::cout << config_to_json(config).dump(2) << "\n";
      return kExitOk;
    }
    for (auto const& s : subs) {
      if (commands[s.name]->parsed()) {
        std::signal(SIGINT, on_sigint);
        std::signal(SIGTERM, on_sigint);
        return s.fn(config, g);
      }
    }
    std::cerr << app.help();
    return kExitUsage;
  });
}
