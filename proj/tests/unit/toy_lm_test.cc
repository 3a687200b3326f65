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


#include "sfc/toy_lm.h"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "sfc/enumeration.h"
#include "sfc/error.h"
#include "test_support.h"

namespace sfc {
namespace {

using test_support::ThrownCode;

// P(a) = P(b) = 0.5, a is always followed by b, b always ends.
ToyLmSpec TwoStepSpec() {
  return ToyLmBuilder("two-step").Set({}, "a", 0.5).Set({}, "b", 0.5)
      .Set({"a"}, "b", 1.0).Build();
}

TEST(ToyLmBuilderTest, CompletesTheTable) {
  const ToyLmSpec spec = TwoStepSpec();
  EXPECT_EQ(spec.max_len, 2u);
  EXPECT_EQ(spec.table.at({"b"}).at("</s>"), 1.0);
  EXPECT_EQ(spec.vocabulary, (std::vector<std::string>{"</s>", "a", "b"}));
}

TEST(ToyLmBuilderTest, LeftoverMassEndsTheSequence) {
  const ToyLmSpec spec = ToyLmBuilder("m").Set({}, "a", 0.25).Build();
  EXPECT_DOUBLE_EQ(spec.table.at({}).at("</s>"), 0.75);
  EXPECT_THROW(ToyLmBuilder("m").Set({}, "a", 0.75).Set({}, "b", 0.5).Build(),
               Error);
}

TEST(ToyLmBuilderTest, UniformPathsBranchEvenly) {
  const ToyLmSpec spec = ToyLmBuilder("u")
                             .AddUniformPath({"a", "b"})
                             .AddUniformPath({"a", "c"})
                             .AddUniformPath({"d"})
                             .Build();
  EXPECT_DOUBLE_EQ(spec.table.at({}).at("a"), 0.5);
  EXPECT_DOUBLE_EQ(spec.table.at({"a"}).at("c"), 0.5);
  EXPECT_DOUBLE_EQ(spec.table.at({"d"}).at("</s>"), 1.0);
}

TEST(ToyLmSpecTest, ValidationRejectsBrokenSpecs) {
  ToyLmSpec spec = TwoStepSpec();
  spec.table[{}]["a"] = 0.6;
  EXPECT_THROW(ValidateToyLmSpec(spec), Error);

  spec = TwoStepSpec();
  spec.table.erase({"b"});
  EXPECT_EQ(ThrownCode([&] { ValidateToyLmSpec(spec); }),
            ErrorCode::kIncompleteTable);

  spec = TwoStepSpec();
  spec.vocabulary.push_back("ab");
  EXPECT_THROW(ValidateToyLmSpec(spec), Error);

  spec = TwoStepSpec();
  spec.table[{}] = {{"z", 1.0}};
  EXPECT_THROW(ValidateToyLmSpec(spec), Error);
}

TEST(ToyLmSpecTest, JsonRoundTrip) {
  const ToyLmSpec spec = TwoStepSpec();
  const ToyLmSpec back = ToyLmSpecFromJson(ToyLmSpecToJson(spec));
  EXPECT_EQ(back.table, spec.table);
  EXPECT_EQ(back.vocabulary, spec.vocabulary);
  EXPECT_EQ(back.max_len, spec.max_len);
  EXPECT_EQ(back.model_id, spec.model_id);

  const auto dir = test_support::MakeTempDir("toy");
  SaveToyLmSpec(spec, dir / "spec.json");
  EXPECT_EQ(LoadToyLmSpec(dir / "spec.json").table, spec.table);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(LoadToyLmSpec(dir / "missing.json"), Error);
}

TEST(ToyLanguageModelTest, TokenizesUniquely) {
  const ToyLanguageModel model(
      ToyLmBuilder("t").AddUniformPath({"a", "bc", "d"}).Build());
  EXPECT_EQ(model.Tokenize("abcd"), (TokenSequence{"a", "bc", "d"}));
  EXPECT_TRUE(model.Tokenize("").empty());
  EXPECT_EQ(ThrownCode([&] { model.Tokenize("ab"); }),
            ErrorCode::kNotRepresentable);
}

TEST(ToyBackendTest, ChainRuleScores) {
  ToyBackend backend(TwoStepSpec());
  const BackendScore s = backend.ScoreContinuation("a", "b");
  EXPECT_EQ(s.tokens, (std::vector<std::string>{"b"}));
  EXPECT_EQ(s.logprobs.values(), (std::vector<double>{0.0}));
  EXPECT_EQ(s.context_echo, "a");
  EXPECT_EQ(s.model_id, "two-step");

  const BackendScore full = backend.ScoreContinuation("", "ab");
  EXPECT_DOUBLE_EQ(full.logprobs.values()[0], std::log(0.5));
  EXPECT_DOUBLE_EQ(full.logprobs.values()[1], 0.0);
}

TEST(ToyBackendTest, ZeroProbabilityIsTheFloor) {
  ToyBackend backend(TwoStepSpec());
  EXPECT_EQ(backend.ScoreContinuation("a", "a").logprobs.values()[0],
            kLogProbFloor);
}

TEST(ToyBackendTest, ErrorsAreTyped) {
  ToyBackend backend(TwoStepSpec());
  EXPECT_EQ(ThrownCode([&] { backend.ScoreContinuation("a", ""); }),
            ErrorCode::kEmptyHypothesis);
  EXPECT_EQ(ThrownCode([&] { backend.ScoreContinuation("ab", "b"); }),
            ErrorCode::kNotRepresentable);
  EXPECT_EQ(ThrownCode([&] { backend.ScoreContinuation("", "x"); }),
            ErrorCode::kNotRepresentable);
}

TEST(SequenceEnumerationTest, HandComputedProbabilities) {
  const SequenceEnumeration e(TwoStepSpec());
  ASSERT_EQ(e.sequences().size(), 2u);
  EXPECT_DOUBLE_EQ(e.TotalProbability(), 1.0);
  EXPECT_DOUBLE_EQ(e.PrefixProbability("a"), 0.5);
  EXPECT_DOUBLE_EQ(e.PrefixProbability(""), 1.0);
  EXPECT_DOUBLE_EQ(e.ConditionalProbability("a", "b"), 1.0);
  EXPECT_DOUBLE_EQ(e.ConditionalProbability("", "b"), 0.5);
  EXPECT_DOUBLE_EQ(e.MarginalAtPosition(1, "b"), 0.5);
  EXPECT_DOUBLE_EQ(e.JointAtPosition("a", 1, "b"), 0.5);
  EXPECT_DOUBLE_EQ(e.PremiseGivenContinuation("a", 1, "b"), 1.0);
  EXPECT_THROW(e.ConditionalProbability("ba", "b"), Error);
  EXPECT_THROW(e.PremiseGivenContinuation("a", 1, "a"), Error);
  EXPECT_DOUBLE_EQ(EnumerateSequenceProbability(TwoStepSpec(), "", "a"), 0.5);
}

TEST(SequenceEnumerationTest, AgreesWithChainRuleOnRandomSpecs) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const ToyLmSpec spec = test_support::RandomToySpec(rng, "r");
    const SequenceEnumeration e(spec);
    EXPECT_NEAR(e.TotalProbability(), 1.0, 1e-12);
    ToyBackend backend(spec);
    for (const TokenSequence& seq :
         test_support::AllSequences(spec, spec.max_len, false)) {
      const std::string text = test_support::Join(seq);
      const double p = e.ConditionalProbability("", text);
      const double lp = backend.ScoreContinuation("", text).logprobs.Sum();
      EXPECT_NEAR(p, lp <= kLogProbFloor / 2 ? 0.0 : std::exp(lp), 1e-12) << text;
    }
  }
}

}  // namespace
}  // namespace sfc
