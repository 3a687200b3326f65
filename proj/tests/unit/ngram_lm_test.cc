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


#include "sfc/ngram_lm.h"

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sfc/error.h"
#include "test_support.h"

namespace sfc {
namespace {

using test_support::ThrownCode;

TEST(WhitespacePiecesTest, KeepsLeadingWhitespaceAttached) {
  EXPECT_EQ(WhitespacePieces(" the cat  sat"),
            (std::vector<std::string>{" the", " cat", "  sat"}));
  EXPECT_EQ(WhitespacePieces("a b "), (std::vector<std::string>{"a", " b "}));
  EXPECT_EQ(WhitespacePieces("   "), (std::vector<std::string>{"   "}));
  EXPECT_TRUE(WhitespacePieces("").empty());
}

TEST(NGramModelTest, UnigramAddOne) {
  // c(x) = 2 of 3 tokens, |V| = {x, y, <unk>}: (2 + 1) / (3 + 3).
  const NGramModel model(1, 1.0, {"x x y"});
  EXPECT_EQ(model.vocabulary_size(), 3u);
  EXPECT_DOUBLE_EQ(model.Probability({}, "x"), 0.5);
  EXPECT_DOUBLE_EQ(model.Probability({"y"}, "y"), 2.0 / 6.0);
}

TEST(NGramModelTest, BigramAddOne) {
  const NGramModel model(2, 1.0, {"x y", "x x"});
  EXPECT_DOUBLE_EQ(model.Probability({}, "x"), 0.6);
  EXPECT_DOUBLE_EQ(model.Probability({"x"}, "y"), 0.4);
  EXPECT_DOUBLE_EQ(model.Probability({"y"}, "y"), 1.0 / 3.0);
  // Out-of-vocabulary words are scored as <unk>.
  EXPECT_DOUBLE_EQ(model.Probability({"x"}, "zebra"), 0.2);
  EXPECT_EQ(model.Normalize("zebra"), "<unk>");
}

TEST(NGramModelTest, DistributionsNormalize) {
  const NGramModel model(2, 0.5, {"a b c", "b c a", "c c"});
  for (std::string h : {"a", "b", "c", "zzz"}) {
    double total = 0.0;
    for (const std::string& w : model.vocabulary()) total += model.Probability({h}, w);
    EXPECT_NEAR(total, 1.0, 1e-12) << h;
  }
}

TEST(NGramModelTest, RejectsBadParameters) {
  EXPECT_THROW(NGramModel(0, 1.0, {"a"}), Error);
  EXPECT_THROW(NGramModel(2, 0.0, {"a"}), Error);
}

TEST(NGramBackendTest, ScoresPiecesWithContextHistory) {
  NGramBackend backend(2, 1.0, {"x y", "x x"}, "bigram");
  const BackendScore s = backend.ScoreContinuation("x", " y x");
  EXPECT_EQ(s.tokens, (std::vector<std::string>{" y", " x"}));
  EXPECT_DOUBLE_EQ(s.logprobs.values()[0], std::log(0.4));
  // c(y x) = 0, c(y) = 0: 1 / 3.
  EXPECT_DOUBLE_EQ(s.logprobs.values()[1], std::log(1.0 / 3.0));
  EXPECT_EQ(s.model_id, "bigram");
}

TEST(NGramBackendTest, TokensReconstructContinuation) {
  NGramBackend backend(3, 1.0, {"a b c"}, "m");
  for (const std::string cont : {" a", " a b  c", "a\tb", " naïve café."}) {
    std::string joined;
    for (const auto& t : backend.ScoreContinuation("ctx", cont).tokens) joined += t;
    EXPECT_EQ(joined, cont);
  }
}

TEST(NGramBackendTest, ErrorsAreTyped) {
  NGramBackend backend(2, 1.0, {"a"}, "m");
  EXPECT_EQ(ThrownCode([&] { backend.ScoreContinuation("a", ""); }),
            ErrorCode::kEmptyHypothesis);
  EXPECT_EQ(ThrownCode([&] { backend.ScoreContinuation("a", "  "); }),
            ErrorCode::kNotRepresentable);
  NGramLmSpec spec;
  spec.corpus = "/nonexistent/corpus.txt";
  EXPECT_EQ(ThrownCode([&] { NGramBackend b(spec); }), ErrorCode::kNotFound);
}

TEST(NGramBackendTest, LoadsCorpusFile) {
  NGramLmSpec spec;
  spec.order = 2;
  spec.corpus = test_support::FixturePath("ngram_corpus.txt");
  NGramBackend backend(spec);
  EXPECT_EQ(backend.model_id(), "ngram:order=2:k=1:ngram_corpus.txt");
  EXPECT_GT(backend.model().vocabulary_size(), 20u);
}

}  // namespace
}  // namespace sfc
