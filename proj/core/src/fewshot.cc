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

#include "sfc/fewshot.h"

#include <random>

#include "sfc/error.h"

namespace sfc {
namespace {

// Uniform integer in [0, bound) by rejection, independent of
// std::uniform_int_distribution's implementation.
std::uint64_t UniformBelow(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw = 0;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

}  // namespace

std::vector<std::size_t> SeededPermutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t j = i + UniformBelow(rng, n - i);
    std::swap(order[i], order[j]);
  }
  return order;
}

FewShotSampler::FewShotSampler(std::vector<Instance> pool, FewShotConfig config)
    : pool_(std::move(pool)), config_(std::move(config)) {
  if (config_.k < 0) {
    throw Error(ErrorCode::kInvalidArgument, "few-shot k must be >= 0");
  }
  if (static_cast<std::size_t>(config_.k) > pool_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "few-shot pool has " + std::to_string(pool_.size()) +
                    " instances but k = " + std::to_string(config_.k));
  }
  order_ = SeededPermutation(pool_.size(), config_.seed);
}

std::vector<Instance> FewShotSampler::Sample(std::string_view exclude_id) const {
  std::vector<Instance> out;
  const std::size_t k = static_cast<std::size_t>(config_.k);
  for (std::size_t idx : order_) {
    if (out.size() == k) break;
    if (!exclude_id.empty() && pool_[idx].instance_id == exclude_id) continue;
    out.push_back(pool_[idx]);
  }
  if (out.size() < k) {
    throw Error(ErrorCode::kInvalidArgument,
                "few-shot pool too small to draw " + std::to_string(k) +
                    " exemplars for '" + std::string(exclude_id) + "'");
  }
  return out;
}

std::vector<Instance> SampleFewShot(std::span<const Instance> pool,
                                    const FewShotConfig& config) {
  return FewShotSampler(std::vector<Instance>(pool.begin(), pool.end()), config)
      .Sample();
}

}  // namespace sfc
