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

// Scoring strategies for multiple-choice inference with a generative LM.
//
// Every strategy maps per-option token log-probabilities to one real score
// and the selected option is the argmax. All log-probabilities are natural
// logarithms. A backend probability of exactly zero is represented by the
// finite floor kLogProbFloor so that differences of log terms stay finite.

#ifndef SFC_SCORING_H_
#define SFC_SCORING_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sfc {

inline constexpr double kLogProbFloor = -1e9;

// Converts a probability into a log-probability, mapping 0 to the floor.
double LogProbFromProbability(double p);

enum class Strategy {
  kUnc,        // log P(y | x_domain)
  kLm,         // log P(y | x)
  kAvg,        // log P(y | x) / token count
  kPmiDc,      // log P(y | x) - log P(y | x_domain)
  kCc,         // contextual calibration, affine transform of LM probabilities
  kPremiseLm,  // log P(premise | option) on flipped instances
};

std::string_view StrategyName(Strategy s);
// Accepts the names produced by StrategyName (case-insensitive).
Strategy ParseStrategy(std::string_view name);
std::vector<Strategy> ParseStrategyList(std::string_view comma_list);
const std::vector<Strategy>& AllStrategies();

class TokenLogProbs {
 public:
  TokenLogProbs() = default;
  // Throws kInvalidArgument on NaN or positive infinity; -inf is clamped to
  // the floor.
  explicit TokenLogProbs(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t token_count() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  double Sum() const;

  friend bool operator==(const TokenLogProbs&, const TokenLogProbs&) = default;

 private:
  std::vector<double> values_;
};

struct OptionEvidence {
  // Continuation scored after the full conditional context.
  TokenLogProbs conditional;
  // Same continuation scored after the domain premise.
  TokenLogProbs domain_conditional;
  int option_index = 0;
};

struct StrategyScore {
  Strategy strategy;
  double value;
};

StrategyScore ScoreLm(const OptionEvidence& evidence);
StrategyScore ScoreAvg(const OptionEvidence& evidence);
StrategyScore ScorePmiDc(const OptionEvidence& evidence);
StrategyScore ScoreUnc(const OptionEvidence& evidence);
// Same arithmetic as ScoreLm; only meaningful when the conditional
// continuation is the premise (flipped instances).
StrategyScore ScorePremiseLm(const OptionEvidence& evidence);

// Dispatches to one of the per-option strategies above. kCc is not a
// per-option strategy and is rejected.
StrategyScore Score(Strategy strategy, const OptionEvidence& evidence);

// Index of the highest score; ties go to the lowest index.
std::size_t Select(std::span<const StrategyScore> scores);

struct CalibrationWeights {
  std::map<std::string, double> per_label_scale;
  std::map<std::string, double> bias;

  // Throws kInvalidArgument if a scale is not strictly positive or the bias
  // keys differ from the scale keys.
  void Validate() const;
};

// Default content-free inputs used to estimate the label prior.
const std::vector<std::string>& DefaultContentFreeInputs();

// Averages the label distributions induced by the content-free inputs and
// returns diagonal weights 1 / mean(p_cf) with zero bias. Every distribution
// must cover the same label set.
CalibrationWeights EstimateContentFreeWeights(
    std::span<const std::map<std::string, double>> content_free_distributions);

// Calibrated value raw(label) * scale(label) + bias(label). Values are in the
// probability domain, not log domain. Throws kInvalidArgument when the label
// sets differ or a raw probability is negative.
std::map<std::string, StrategyScore> ScoreCc(
    const std::map<std::string, double>& raw_label_probs,
    const CalibrationWeights& weights);

// Normalizes LM log scores over a closed label set into probabilities
// (softmax over the given labels).
std::vector<double> NormalizeLogScores(std::span<const double> log_scores);

}  // namespace sfc

#endif  // SFC_SCORING_H_
