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

#include "palo_forge/retry.h"

#include <algorithm>
#include <cmath>

#include "palo_forge/errors.h"

namespace palo_forge {

Clock::duration RetryPolicy::backoff_for(int attempt) const {
  using Ms = std::chrono::duration<double, std::milli>;
  auto delay = Ms(initial_backoff) * std::pow(multiplier, attempt);
  auto capped = std::min(delay, Ms(max_backoff));
  return std::chrono::duration_cast<Clock::duration>(capped);
}

std::string call_with_retries(RetryPolicy const& policy, Clock& clock,
                              std::function<std::string()> const& fn) {
  auto const attempts = std::max(1, policy.max_attempts);
  for (int attempt = 0;; ++attempt) {
    try {
      return fn();
    } catch (BackendError const& e) {
      if (!e.retryable()) throw;
      if (attempt + 1 >= attempts) {
        throw BackendError(BackendErrorKind::kExhausted,
                           "gave up after " + std::to_string(attempts) +
                               " attempts: " + e.what(),
                           e.http_status());
      }
    }
    clock.sleep_for(policy.backoff_for(attempt));
  }
}

}  // namespace palo_forge
