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

// Review subset selection. Uses std::mt19937_64 (whose output sequence is
// fixed by the standard) plus a hand-rolled bounded draw, so a seed selects
// the same subset on every platform.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "palo_forge/dataset.h"

namespace palo_forge {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr std::size_t kDefaultReviewSampleSize = 1000;

/// Uniform integer in [0, bound) by rejection; bound must be > 0.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// `n` distinct indices from [0, population), uniformly without replacement
/// (partial Fisher-Yates), returned in ascending order. Throws UsageError if
/// n > population.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n,
                                        std::uint64_t seed);

/// Record ids of a uniform sample, in dataset order.
std::vector<std::string> sample_for_review(
    std::span<InstructionRecord const> records,
    std::size_t n = kDefaultReviewSampleSize, std::uint64_t seed = kDefaultSeed);

/// Splits the records into flagged and clean strata, allots `n` in
/// proportion (largest remainder, ties to flagged) and samples each stratum.
std::vector<std::string> sample_for_review_stratified(
    std::span<InstructionRecord const> records,
    std::set<std::string, std::less<>> const& flagged_ids, std::size_t n,
    std::uint64_t seed = kDefaultSeed);

}  // namespace palo_forge
