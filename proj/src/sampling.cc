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

#include "palo_forge/sampling.h"

#include <algorithm>
#include <numeric>

#include "palo_forge/errors.h"

namespace palo_forge {
namespace {

// Partial Fisher-Yates over `pool`, consuming draws from `rng`.
std::vector<std::size_t> draw(std::vector<std::size_t> pool, std::size_t n,
                              std::mt19937_64& rng) {
  for (std::size_t i = 0; i < n; ++i) {
    auto j = i + static_cast<std::size_t>(uniform_below(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

}  // namespace

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw UsageError("empty range");
  // 2^64 mod bound: the low values that would bias r % bound.
  std::uint64_t const threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n,
                                        std::uint64_t seed) {
  if (n > population) {
    throw UsageError("cannot sample " + std::to_string(n) + " of " +
                     std::to_string(population) + " records");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> pool(population);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  auto picked = draw(std::move(pool), n, rng);
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<std::string> sample_for_review(
    std::span<InstructionRecord const> records, std::size_t n,
    std::uint64_t seed) {
  std::vector<std::string> ids;
  for (auto i : sample_indices(records.size(), n, seed)) {
    ids.push_back(records[i].id);
  }
  return ids;
}

std::vector<std::string> sample_for_review_stratified(
    std::span<InstructionRecord const> records,
    std::set<std::string, std::less<>> const& flagged_ids, std::size_t n,
    std::uint64_t seed) {
  if (n > records.size()) {
    throw UsageError("cannot sample " + std::to_string(n) + " of " +
                     std::to_string(records.size()) + " records");
  }
  std::vector<std::size_t> flagged, clean;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (flagged_ids.count(records[i].id) ? flagged : clean).push_back(i);
  }
  std::size_t total = records.size();
  std::size_t n_flagged = 0, n_clean = 0;
  if (total > 0) {
    n_flagged = n * flagged.size() / total;
    n_clean = n * clean.size() / total;
    if (n_flagged + n_clean < n) {
      auto rem_f = n * flagged.size() % total;
      auto rem_c = n * clean.size() % total;
      if (rem_f >= rem_c && n_flagged < flagged.size()) {
        ++n_flagged;
      } else {
        ++n_clean;
      }
    }
  }

  std::mt19937_64 rng(seed);
  auto picked = draw(std::move(flagged), n_flagged, rng);
  auto more = draw(std::move(clean), n_clean, rng);
  picked.insert(picked.end(), more.begin(), more.end());
  std::sort(picked.begin(), picked.end());
  std::vector<std::string> ids;
  for (auto i : picked) ids.push_back(records[i].id);
  return ids;
}

}  // namespace palo_forge
