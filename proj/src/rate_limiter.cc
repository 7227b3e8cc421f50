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

#include "palo_forge/rate_limiter.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "palo_forge/errors.h"

namespace palo_forge {

SystemClock& SystemClock::instance() {
  static SystemClock clock;
  return clock;
}

Clock::time_point SystemClock::now() { return std::chrono::steady_clock::now(); }

void SystemClock::sleep_until(time_point t) { std::this_thread::sleep_until(t); }

Clock::time_point VirtualClock::now() {
  std::lock_guard lock(mu_);
  return now_;
}

void VirtualClock::sleep_until(time_point t) {
  std::lock_guard lock(mu_);
  now_ = std::max(now_, t);
}

void VirtualClock::advance(duration d) {
  std::lock_guard lock(mu_);
  now_ += d;
}

RateLimiter::RateLimiter(double requests_per_minute, Clock& clock)
    : clock_(clock) {
  if (!(requests_per_minute > 0)) {
    throw UsageError("rate limit must be positive");
  }
  // Fractional rates keep a capacity of one and stretch the window instead.
  capacity_ = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(requests_per_minute)));
  auto window = std::chrono::duration<double>(
      60.0 * static_cast<double>(capacity_) / requests_per_minute);
  window_ = std::chrono::duration_cast<Clock::duration>(window);
}

void RateLimiter::acquire() {
  for (;;) {
    Clock::time_point wake;
    {
      std::lock_guard lock(mu_);
      auto now = clock_.now();
      while (!grants_.empty() && grants_.front() + window_ <= now) {
        grants_.pop_front();
      }
      if (grants_.size() < capacity_) {
        grants_.push_back(now);
        return;
      }
      wake = grants_.front() + window_;
    }
    clock_.sleep_until(wake);
  }
}

}  // namespace palo_forge
