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
#include <cstddef>
#include <deque>
#include <mutex>

namespace palo_forge {

/// Time source for rate limiting and backoff, replaceable in tests.
class Clock {
 public:
  using time_point = std::chrono::steady_clock::time_point;
  using duration = std::chrono::steady_clock::duration;

  virtual ~Clock() = default;
  virtual time_point now() = 0;
  virtual void sleep_until(time_point t) = 0;
  void sleep_for(duration d) { sleep_until(now() + d); }
};

class SystemClock : public Clock {
 public:
  static SystemClock& instance();

  time_point now() override;
  void sleep_until(time_point t) override;
};

/// Manually advanced clock. Sleeping jumps time forward instantly.
class VirtualClock : public Clock {
 public:
  time_point now() override;
  void sleep_until(time_point t) override;
  void advance(duration d);

 private:
  std::mutex mu_;
  time_point now_{};
};

/// Sliding-window limiter: at most `capacity()` grants in any window of
/// length `window()`. Shared by all workers of one backend.
class RateLimiter {
 public:
  /// Throws UsageError unless requests_per_minute > 0.
  RateLimiter(double requests_per_minute, Clock& clock);

  /// Blocks until a request may be sent.
  void acquire();

  std::size_t capacity() const { return capacity_; }
  Clock::duration window() const { return window_; }

 private:
  Clock& clock_;
  std::size_t capacity_;
  Clock::duration window_;
  std::mutex mu_;
  std::deque<Clock::time_point> grants_;
};

}  // namespace palo_forge
