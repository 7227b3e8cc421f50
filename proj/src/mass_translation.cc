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

#include "palo_forge/mass_translation.h"

#include <exception>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "palo_forge/checkpoint.h"
#include "palo_forge/errors.h"

namespace palo_forge {

Json summary_to_json(MassTranslationResult const& result) {
  Json j;
  auto langs = Json::object();
  for (auto lang : result.languages) {
    auto it = result.summary.find(lang);
    LanguageSummary s = it == result.summary.end() ? LanguageSummary{} : it->second;
    langs[std::string(code_of(lang))] = Json{
        {"translated", s.translated}, {"flagged", s.flagged}, {"failed", s.failed}};
  }
  j["languages"] = std::move(langs);
  j["backend_calls"] = result.backend_calls;
  j["cache_hits"] = result.cache_hits;
  j["resumed"] = result.resumed;
  j["interrupted"] = result.interrupted;
  auto failures = Json::array();
  for (auto const& f : result.failures) {
    auto k = key_to_json(f.key);
    k["message"] = f.message;
    failures.push_back(std::move(k));
  }
  j["failures"] = std::move(failures);
  return j;
}

MassTranslationResult run_mass_translation(
    std::span<InstructionRecord const> records,
    std::span<Language const> languages, Backend& backend,
    MassTranslationOptions const& options) {
  if (options.parallelism < 1) throw UsageError("parallelism must be >= 1");
  if (options.checkpoint_every < 1) {
    throw UsageError("checkpoint interval must be >= 1");
  }
  std::set<Language> seen;
  for (auto lang : languages) {
    if (lang == Language::kEnglish) {
      throw UsageError("English is the source language");
    }
    if (!seen.insert(lang).second) {
      throw UsageError("duplicate language " + std::string(code_of(lang)));
    }
  }

  auto fingerprint = dataset_fingerprint(records);
  bool const persist = !options.checkpoint_path.empty();
  Checkpoint checkpoint =
      persist ? Checkpoint::open(options.checkpoint_path, fingerprint)
              : Checkpoint(fingerprint);

  MassTranslationResult result;
  result.languages.assign(languages.begin(), languages.end());
  for (auto lang : languages) {
    for (auto const& r : records) {
      if (checkpoint.is_completed(r.id, lang)) ++result.resumed;
    }
  }

  std::size_t const n_records = records.size();
  std::size_t const n_items = n_records * languages.size();
  std::vector<std::optional<RecordTranslation>> slots(n_items);
  TranslationStats stats;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::atomic<bool> interrupted{false};
  std::mutex error_mu;
  std::exception_ptr error;
  std::mutex flush_mu;
  std::size_t since_flush = 0;

  auto worker = [&] {
    for (;;) {
      if (abort.load()) return;
      if (options.stop && options.stop->load()) {
        interrupted = true;
        return;
      }
      std::size_t i = next.fetch_add(1);
      if (i >= n_items) return;
      Language lang = languages[i / n_records];
      auto const& record = records[i % n_records];
      try {
        auto rt = translate_record(record, lang, backend, options.translation,
                                   &checkpoint, &stats);
        if (rt.complete()) checkpoint.mark_completed(record.id, lang);
        slots[i] = std::move(rt);
        if (persist) {
          std::lock_guard lock(flush_mu);
          if (++since_flush >= static_cast<std::size_t>(options.checkpoint_every)) {
            since_flush = 0;
            checkpoint.save(options.checkpoint_path);
          }
        }
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        abort = true;
        return;
      }
    }
  };

  int const n_threads = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(options.parallelism),
                            std::max<std::size_t>(n_items, 1)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  if (persist) checkpoint.save(options.checkpoint_path);

  result.interrupted = interrupted.load();
  result.backend_calls = stats.backend_calls.load();
  result.cache_hits = stats.cache_hits.load();
  for (std::size_t li = 0; li < languages.size(); ++li) {
    Language lang = languages[li];
    auto& summary = result.summary[lang];
    auto& dataset = result.datasets[lang];
    for (std::size_t ri = 0; ri < n_records; ++ri) {
      auto& slot = slots[li * n_records + ri];
      if (!slot) continue;
      if (!slot->complete()) {
        ++summary.failed;
        for (auto& f : slot->failures) result.failures.push_back(std::move(f));
        continue;
      }
      ++summary.translated;
      if (slot->flagged()) ++summary.flagged;
      dataset.push_back(std::move(slot->record));
      for (auto& u : slot->units) result.units.push_back(std::move(u));
    }
  }
  return result;
}

}  // namespace palo_forge
