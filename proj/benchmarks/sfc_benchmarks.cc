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


#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "sfc/enumeration.h"
#include "sfc/response_cache.h"
#include "sfc/scoring.h"
#include "sfc/toy_lm.h"

namespace sfc {
namespace {

// Chain of `depth` states, each uniform over `width` tokens.
ToyLmSpec UniformTree(int width, int depth) {
  ToyLmBuilder builder("bench");
  std::vector<std::string> tokens;
  for (int i = 0; i < width; ++i) tokens.push_back(std::string(1, static_cast<char>('a' + i)));
  std::vector<TokenSequence> layer = {{}};
  for (int d = 0; d < depth; ++d) {
    std::vector<TokenSequence> next;
    for (const TokenSequence& prefix : layer) {
      for (const std::string& t : tokens) {
        builder.Set(prefix, t, 1.0 / (width + 1));
        TokenSequence child = prefix;
        child.push_back(t);
        next.push_back(std::move(child));
      }
    }
    layer = std::move(next);
  }
  return builder.Build();
}

void BM_ScoreStrategies(benchmark::State& state) {
  const OptionEvidence ev{TokenLogProbs({-0.5, -1.25, -2.0, -0.75}),
                          TokenLogProbs({-1.0, -1.5, -1.75, -0.5}), 0};
  for (auto _ : state) {
    for (Strategy s : {Strategy::kUnc, Strategy::kLm, Strategy::kAvg, Strategy::kPmiDc}) {
      benchmark::DoNotOptimize(Score(s, ev));
    }
  }
}
BENCHMARK(BM_ScoreStrategies);

void BM_ToyBackendScore(benchmark::State& state) {
  ToyBackend backend(UniformTree(4, 6));
  for (auto _ : state) {
    benchmark::DoNotOptimize(backend.ScoreContinuation("abc", "dab"));
  }
}
BENCHMARK(BM_ToyBackendScore);

void BM_SequenceEnumeration(benchmark::State& state) {
  const ToyLmSpec spec = UniformTree(3, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const SequenceEnumeration e(spec);
    benchmark::DoNotOptimize(e.ConditionalProbability("ab", "c"));
  }
}
BENCHMARK(BM_SequenceEnumeration)->Arg(3)->Arg(5)->Arg(7);

void BM_CacheLookup(benchmark::State& state) {
  const auto dir = std::filesystem::temp_directory_path() / "sfc_bench_cache";
  std::filesystem::remove_all(dir);
  auto cache = std::make_shared<ResponseCache>(dir / kCacheFileName, CacheMode::kReadWrite);
  auto inner = std::make_shared<ToyBackend>(UniformTree(4, 6));
  CachedBackend backend(cache, inner, inner->model_id());
  backend.ScoreContinuation("abc", "dab");
  for (auto _ : state) {
    benchmark::DoNotOptimize(backend.ScoreContinuation("abc", "dab"));
  }
  std::filesystem::remove_all(dir);
}
BENCHMARK(BM_CacheLookup);

}  // namespace
}  // namespace sfc

BENCHMARK_MAIN();
