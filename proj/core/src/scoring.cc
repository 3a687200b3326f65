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

#include "sfc/scoring.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "sfc/error.h"
#include "text.h"

namespace sfc {

double LogProbFromProbability(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0 + 1e-12) {
    throw Error(ErrorCode::kInvalidArgument,
                "probability out of range: " + std::to_string(p));
  }
  if (p == 0.0) return kLogProbFloor;
  return std::max(std::log(p), kLogProbFloor);
}

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kUnc: return "unc";
    case Strategy::kLm: return "lm";
    case Strategy::kAvg: return "avg";
    case Strategy::kPmiDc: return "pmi_dc";
    case Strategy::kCc: return "cc";
    case Strategy::kPremiseLm: return "premise_lm";
  }
  return "unknown";
}

const std::vector<Strategy>& AllStrategies() {
  static const std::vector<Strategy> kAll = {
      Strategy::kUnc, Strategy::kLm,  Strategy::kAvg,
      Strategy::kPmiDc, Strategy::kCc, Strategy::kPremiseLm};
  return kAll;
}

Strategy ParseStrategy(std::string_view name) {
  std::string lower = text::ToLower(text::Trim(name));
  if (lower == "pmi" || lower == "pmidc") lower = "pmi_dc";
  for (Strategy s : AllStrategies()) {
    if (StrategyName(s) == lower) return s;
  }
  throw Error(ErrorCode::kConfig,
              "unknown strategy '" + std::string(name) +
                  "' (expected unc, lm, avg, pmi_dc, cc, premise_lm)");
}

std::vector<Strategy> ParseStrategyList(std::string_view comma_list) {
  std::vector<Strategy> out;
  for (const std::string& piece : text::Split(comma_list, ',')) {
    if (text::Trim(piece).empty()) continue;
    Strategy s = ParseStrategy(piece);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  if (out.empty()) {
    throw Error(ErrorCode::kConfig, "at least one strategy is required");
  }
  return out;
}

TokenLogProbs::TokenLogProbs(std::vector<double> values)
    : values_(std::move(values)) {
  for (double& v : values_) {
    if (std::isnan(v) || v == std::numeric_limits<double>::infinity()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "token log-probability must not be NaN or +inf");
    }
    if (v < kLogProbFloor) v = kLogProbFloor;
  }
}

double TokenLogProbs::Sum() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

namespace {

void RequireNonEmpty(const TokenLogProbs& lp) {
  if (lp.empty()) throw Error(ErrorCode::kEmptyHypothesis, "empty hypothesis");
}

}  // namespace

StrategyScore ScoreLm(const OptionEvidence& evidence) {
  RequireNonEmpty(evidence.conditional);
  return {Strategy::kLm, evidence.conditional.Sum()};
}

StrategyScore ScoreAvg(const OptionEvidence& evidence) {
  RequireNonEmpty(evidence.conditional);
  return {Strategy::kAvg,
          evidence.conditional.Sum() /
              static_cast<double>(evidence.conditional.token_count())};
}

StrategyScore ScorePmiDc(const OptionEvidence& evidence) {
  RequireNonEmpty(evidence.conditional);
  RequireNonEmpty(evidence.domain_conditional);
  if (evidence.conditional.token_count() !=
      evidence.domain_conditional.token_count()) {
    throw Error(ErrorCode::kTokenizationDrift,
                "tokenization drift: continuation has " +
                    std::to_string(evidence.conditional.token_count()) +
                    " tokens after the premise but " +
                    std::to_string(
                        evidence.domain_conditional.token_count()) +
                    " after the domain premise");
  }
  return {Strategy::kPmiDc,
          evidence.conditional.Sum() - evidence.domain_conditional.Sum()};
}

StrategyScore ScoreUnc(const OptionEvidence& evidence) {
  RequireNonEmpty(evidence.domain_conditional);
  return {Strategy::kUnc, evidence.domain_conditional.Sum()};
}

StrategyScore ScorePremiseLm(const OptionEvidence& evidence) {
  RequireNonEmpty(evidence.conditional);
  return {Strategy::kPremiseLm, evidence.conditional.Sum()};
}

StrategyScore Score(Strategy strategy, const OptionEvidence& evidence) {
  switch (strategy) {
    case Strategy::kUnc: return ScoreUnc(evidence);
    case Strategy::kLm: return ScoreLm(evidence);
    case Strategy::kAvg: return ScoreAvg(evidence);
    case Strategy::kPmiDc: return ScorePmiDc(evidence);
    case Strategy::kPremiseLm: return ScorePremiseLm(evidence);
    case Strategy::kCc: break;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "cc scores label sets, not single options");
}

std::size_t Select(std::span<const StrategyScore> scores) {
  if (scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot select from no scores");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].strategy != scores[0].strategy) {
      throw Error(ErrorCode::kInvalidArgument,
                  "scores from different strategies are not comparable");
    }
    if (scores[i].value > scores[best].value) best = i;
  }
  return best;
}

void CalibrationWeights::Validate() const {
  for (const auto& [label, scale] : per_label_scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "calibration scale for '" + label + "' must be positive");
    }
  }
  for (const auto& [label, b] : bias) {
    if (!per_label_scale.contains(label) || !std::isfinite(b)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "calibration bias for unknown label '" + label + "'");
    }
  }
}

const std::vector<std::string>& DefaultContentFreeInputs() {
  static const std::vector<std::string> kInputs = {"N/A", "", "[MASK]"};
  return kInputs;
}

CalibrationWeights EstimateContentFreeWeights(
    std::span<const std::map<std::string, double>> content_free_distributions) {
  if (content_free_distributions.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "at least one content-free distribution is required");
  }
  std::map<std::string, double> mean;
  for (const auto& [label, p] : content_free_distributions.front()) {
    mean[label] = 0.0;
  }
  for (const auto& dist : content_free_distributions) {
    if (dist.size() != mean.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "content-free distributions cover different label sets");
    }
    for (const auto& [label, p] : dist) {
      auto it = mean.find(label);
      if (it == mean.end()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "content-free distributions cover different label sets");
      }
      it->second += p;
    }
  }
  CalibrationWeights weights;
  const double n = static_cast<double>(content_free_distributions.size());
  for (const auto& [label, total] : mean) {
    const double p = total / n;
    if (!(p > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "content-free probability of '" + label + "' is zero");
    }
    weights.per_label_scale[label] = 1.0 / p;
    weights.bias[label] = 0.0;
  }
  return weights;
}

std::map<std::string, StrategyScore> ScoreCc(
    const std::map<std::string, double>& raw_label_probs,
    const CalibrationWeights& weights) {
  weights.Validate();
  if (raw_label_probs.size() != weights.per_label_scale.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "label set does not match calibration weights");
  }
  std::map<std::string, StrategyScore> out;
  for (const auto& [label, p] : raw_label_probs) {
    auto scale = weights.per_label_scale.find(label);
    if (scale == weights.per_label_scale.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label '" + label + "' has no calibration weight");
    }
    if (std::isnan(p) || p < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "raw probability of '" + label + "' must be non-negative");
    }
    auto b = weights.bias.find(label);
    const double bias = b == weights.bias.end() ? 0.0 : b->second;
    out.emplace(label, StrategyScore{Strategy::kCc, p * scale->second + bias});
  }
  return out;
}

std::vector<double> NormalizeLogScores(std::span<const double> log_scores) {
  std::vector<double> out(log_scores.size(), 0.0);
  if (log_scores.empty()) return out;
  const double max = *std::max_element(log_scores.begin(), log_scores.end());
  double total = 0.0;
  for (std::size_t i = 0; i < log_scores.size(); ++i) {
    out[i] = std::exp(log_scores[i] - max);
    total += out[i];
  }
  for (double& p : out) p /= total;
  return out;
}

}  // namespace sfc
