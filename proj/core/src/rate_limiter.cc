// Copyright 2026 The sfc-eval Authors.
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

#include "sfc/rate_limiter.h"

#include <algorithm>
#include <thread>

#include "sfc/error.h"

namespace sfc {

TokenBucket::TokenBucket(double tokens_per_second, double burst)
    : rate_(tokens_per_second),
      burst_(std::max(1.0, burst)),
      available_(std::max(1.0, burst)),
      last_(Clock::now()) {
  if (tokens_per_second < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "rate must be non-negative");
  }
}

void TokenBucket::Refill(Clock::time_point now) {
  const std::chrono::duration<double> elapsed = now - last_;
  if (elapsed.count() > 0.0) {
    available_ = std::min(burst_, available_ + elapsed.count() * rate_);
    last_ = now;
  }
}

TokenBucket::Clock::duration TokenBucket::WaitTime(Clock::time_point now) {
  if (rate_ == 0.0) return Clock::duration::zero();
  std::lock_guard<std::mutex> lock(mu_);
  Refill(now);
  if (available_ >= 1.0) return Clock::duration::zero();
  return std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>((1.0 - available_) / rate_));
}

void TokenBucket::Acquire() {
  if (rate_ == 0.0) return;
  while (true) {
    Clock::duration wait;
    {
      std::lock_guard<std::mutex> lock(mu_);
      Refill(Clock::now());
      if (available_ >= 1.0) {
        available_ -= 1.0;
        return;
      }
      wait = std::chrono::duration_cast<Clock::duration>(
          std::chrono::duration<double>((1.0 - available_) / rate_));
    }
    std::this_thread::sleep_for(wait);
  }
}

}  // namespace sfc
