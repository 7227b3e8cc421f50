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

#pragma once

#include <chrono>
#include <functional>
#include <string>

#include "palo_forge/rate_limiter.h"

namespace palo_forge {

/// Bounded exponential backoff: attempt k (0-based) waits
/// min(initial_backoff * multiplier^k, max_backoff) before attempt k + 1.
struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{30'000};
  double multiplier = 2.0;

  Clock::duration backoff_for(int attempt) const;
};

/// Calls `fn` until it returns, throws a non-retryable error, or the policy
/// runs out of attempts. Exhaustion surfaces as a BackendError of kind
/// kExhausted wrapping the last failure.
std::string call_with_retries(RetryPolicy const& policy, Clock& clock,
                              std::function<std::string()> const& fn);

}  // namespace palo_forge
