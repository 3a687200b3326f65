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

#ifndef SFC_RATE_LIMITER_H_
#define SFC_RATE_LIMITER_H_

#include <chrono>
#include <mutex>

namespace sfc {

// Token-bucket pacing. A rate of 0 disables pacing.
class TokenBucket {
 public:
  using Clock = std::chrono::steady_clock;

  TokenBucket(double tokens_per_second, double burst);

  // Blocks until a token is available, then consumes it.
  void Acquire();

  // How long a caller would wait for a token at time `now`, without
  // consuming one.
  Clock::duration WaitTime(Clock::time_point now);

 private:
  void Refill(Clock::time_point now);

  const double rate_;
  const double burst_;
  double available_;
  Clock::time_point last_;
  std::mutex mu_;
};

}  // namespace sfc

#endif  // SFC_RATE_LIMITER_H_
