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

// Seeded few-shot exemplar sampling.
//
// One permutation of the pool is drawn per seed. An instance's exemplars are
// the first k pool entries of that permutation whose id differs from the
// instance's own, so an instance never primes itself and all instances share
// one exemplar set whenever the pool excludes them.

#ifndef SFC_FEWSHOT_H_
#define SFC_FEWSHOT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sfc/instance.h"

namespace sfc {

struct FewShotConfig {
  int k = 0;
  std::uint64_t seed = 0;
  std::string source_split = "train";
  std::string separator = "\n\n";
};

// Deterministic permutation of [0, n). The generator and index mapping are
// fixed so results do not depend on the standard library implementation.
std::vector<std::size_t> SeededPermutation(std::size_t n, std::uint64_t seed);

class FewShotSampler {
 public:
  // Throws kInvalidArgument when k is negative or exceeds the pool size.
  FewShotSampler(std::vector<Instance> pool, FewShotConfig config);

  // Exemplars for the instance `exclude_id`. Throws kInvalidArgument when
  // fewer than k pool entries remain after the exclusion.
  std::vector<Instance> Sample(std::string_view exclude_id = {}) const;

  const FewShotConfig& config() const { return config_; }

 private:
  std::vector<Instance> pool_;
  FewShotConfig config_;
  std::vector<std::size_t> order_;
};

// Samples k exemplars from `pool` without exclusion.
std::vector<Instance> SampleFewShot(std::span<const Instance> pool,
                                    const FewShotConfig& config);

}  // namespace sfc

#endif  // SFC_FEWSHOT_H_
