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

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "sfc/error.h"

namespace sfc {
namespace {

constexpr double kNormalizationTolerance = 1e-12;

std::string DescribePrefix(std::span<const std::string> prefix) {
  std::string out = "[";
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i > 0) out += ", ";
    out += "\"" + prefix[i] + "\"";
  }
  return out + "]";
}

}  // namespace

void ValidateToyLmSpec(const ToyLmSpec& spec) {
  if (spec.end_marker.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "toy LM end marker is empty");
  }
  std::set<std::string> vocab;
  for (const std::string& tok : spec.vocabulary) {
    if (tok.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "toy LM has an empty token");
    }
    if (!vocab.insert(tok).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "toy LM vocabulary repeats '" + tok + "'");
    }
  }
  if (!vocab.contains(spec.end_marker)) {
    throw Error(ErrorCode::kInvalidArgument,
                "toy LM vocabulary lacks the end marker");
  }
  // In sorted order a token that is a proper prefix of others is immediately
  // followed by one of them.
  std::string previous;
  bool have_previous = false;
  for (const std::string& tok : vocab) {
    if (tok == spec.end_marker) continue;
    if (have_previous && tok.starts_with(previous)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "toy LM vocabulary is not prefix-free: '" + previous +
                      "' is a prefix of '" + tok + "'");
    }
    previous = tok;
    have_previous = true;
  }

  for (const auto& [prefix, next] : spec.table) {
    if (prefix.size() >= spec.max_len) {
      throw Error(ErrorCode::kInvalidArgument,
                  "toy LM state " + DescribePrefix(prefix) +
                      " is at or beyond max_len");
    }
    for (const std::string& tok : prefix) {
      if (!vocab.contains(tok) || tok == spec.end_marker) {
        throw Error(ErrorCode::kInvalidArgument,
                    "toy LM state " + DescribePrefix(prefix) +
                        " uses an invalid token");
      }
    }
    double total = 0.0;
    for (const auto& [tok, p] : next) {
      if (!vocab.contains(tok)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "toy LM state " + DescribePrefix(prefix) +
                        " assigns mass to unknown token '" + tok + "'");
      }
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "toy LM probability out of range at " +
                        DescribePrefix(prefix));
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "toy LM distribution at " << DescribePrefix(prefix)
          << " sums to " << total;
      throw Error(ErrorCode::kInvalidArgument, msg.str());
    }
  }

  std::deque<TokenSequence> frontier{TokenSequence{}};
  while (!frontier.empty()) {
    TokenSequence state = std::move(frontier.front());
    frontier.pop_front();
    auto it = spec.table.find(state);
    if (it == spec.table.end()) {
      throw Error(ErrorCode::kIncompleteTable,
                  "toy LM table has no entry for reachable state " +
                      DescribePrefix(state));
    }
    if (state.size() + 1 >= spec.max_len) continue;
    for (const auto& [tok, p] : it->second) {
      if (p <= 0.0 || tok == spec.end_marker) continue;
      TokenSequence child = state;
      child.push_back(tok);
      frontier.push_back(std::move(child));
    }
  }
}

nlohmann::json ToyLmSpecToJson(const ToyLmSpec& spec) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& [prefix, next] : spec.table) {
    nlohmann::json next_json = nlohmann::json::object();
    for (const auto& [tok, p] : next) next_json[tok] = p;
    table.push_back({{"prefix", prefix}, {"next", next_json}});
  }
  return {{"model_id", spec.model_id},
          {"end_marker", spec.end_marker},
          {"max_len", spec.max_len},
          {"vocabulary", spec.vocabulary},
          {"table", table}};
}

ToyLmSpec ToyLmSpecFromJson(const nlohmann::json& j) {
  ToyLmSpec spec;
  try {
    spec.model_id = j.value("model_id", std::string("toy"));
    spec.end_marker = j.value("end_marker", std::string("</s>"));
    spec.max_len = j.at("max_len").get<std::size_t>();
    spec.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
    for (const auto& entry : j.at("table")) {
      auto prefix = entry.at("prefix").get<TokenSequence>();
      auto next = entry.at("next").get<NextTokenDistribution>();
      if (!spec.table.emplace(std::move(prefix), std::move(next)).second) {
        throw Error(ErrorCode::kDataFormat, "toy LM spec repeats a state");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kDataFormat,
                std::string("malformed toy LM spec: ") + e.what());
  }
  ValidateToyLmSpec(spec);
  return spec;
}

ToyLmSpec LoadToyLmSpec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kNotFound,
                "cannot open toy LM spec " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kDataFormat,
                "toy LM spec " + path.string() + " is not JSON: " + e.what());
  }
  return ToyLmSpecFromJson(j);
}

void SaveToyLmSpec(const ToyLmSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kNotFound, "cannot write " + path.string());
  }
  out << ToyLmSpecToJson(spec).dump(1) << "\n";
}

ToyLanguageModel::ToyLanguageModel(ToyLmSpec spec) : spec_(std::move(spec)) {
  ValidateToyLmSpec(spec_);
  for (std::size_t i = 0; i < spec_.vocabulary.size(); ++i) {
    const std::string& tok = spec_.vocabulary[i];
    if (tok == spec_.end_marker) continue;
    token_index_.emplace(tok, i);
    longest_token_ = std::max(longest_token_, tok.size());
  }
}

TokenSequence ToyLanguageModel::Tokenize(std::string_view text) const {
  TokenSequence out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    const std::size_t limit = std::min(longest_token_, text.size() - pos);
    for (std::size_t len = 1; len <= limit; ++len) {
      auto it = token_index_.find(text.substr(pos, len));
      if (it != token_index_.end()) {
        out.push_back(it->first);
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw Error(ErrorCode::kNotRepresentable,
                  "toy LM cannot tokenize \"" + std::string(text) +
                      "\" at byte " + std::to_string(pos));
    }
  }
  return out;
}

const NextTokenDistribution& ToyLanguageModel::NextDistribution(
    std::span<const std::string> prefix) const {
  auto it = spec_.table.find(TokenSequence(prefix.begin(), prefix.end()));
  if (it == spec_.table.end()) {
    throw Error(ErrorCode::kIncompleteTable,
                "toy LM table has no entry for state " +
                    DescribePrefix(prefix));
  }
  return it->second;
}

double ToyLanguageModel::NextProbability(std::span<const std::string> prefix,
                                         const std::string& token) const {
  const NextTokenDistribution& next = NextDistribution(prefix);
  auto it = next.find(token);
  return it == next.end() ? 0.0 : it->second;
}

BackendScore ToyBackend::ScoreContinuation(std::string_view context,
                                           std::string_view continuation) {
  if (continuation.empty()) {
    throw Error(ErrorCode::kEmptyHypothesis, "empty hypothesis");
  }
  TokenSequence state = model_.Tokenize(context);
  const TokenSequence tokens = model_.Tokenize(continuation);
  if (state.size() + tokens.size() > model_.spec().max_len) {
    throw Error(ErrorCode::kNotRepresentable,
                "context plus continuation exceed the toy LM max_len of " +
                    std::to_string(model_.spec().max_len) + " tokens");
  }
  std::vector<double> logprobs;
  logprobs.reserve(tokens.size());
  // Past a zero-probability token the state is unreachable and may have no
  // table entry; the remaining tokens get the floor.
  bool reachable = true;
  for (const std::string& tok : tokens) {
    const double p = reachable ? model_.NextProbability(state, tok) : 0.0;
    reachable = p > 0.0;
    logprobs.push_back(LogProbFromProbability(p));
    state.push_back(tok);
  }
  return BackendScore{tokens, TokenLogProbs(std::move(logprobs)),
                      model_.spec().model_id, std::string(context)};
}

ToyLmBuilder::ToyLmBuilder(std::string model_id, std::string end_marker)
    : model_id_(std::move(model_id)), end_marker_(std::move(end_marker)) {}

ToyLmBuilder& ToyLmBuilder::Set(const TokenSequence& prefix,
                                const std::string& token, double probability) {
  table_[prefix][token] = probability;
  return *this;
}

ToyLmBuilder& ToyLmBuilder::SetDistribution(const TokenSequence& prefix,
                                            const NextTokenDistribution& next) {
  table_[prefix] = next;
  return *this;
}

ToyLmBuilder& ToyLmBuilder::AddUniformPath(const TokenSequence& path) {
  TokenSequence state;
  for (const std::string& tok : path) {
    auto& children = uniform_children_[state];
    if (std::find(children.begin(), children.end(), tok) == children.end()) {
      children.push_back(tok);
    }
    state.push_back(tok);
  }
  uniform_terminal_[state] = true;
  uniform_children_.try_emplace(state);
  return *this;
}

ToyLmSpec ToyLmBuilder::Build() const {
  ToyLmSpec spec;
  spec.model_id = model_id_;
  spec.end_marker = end_marker_;
  spec.table = table_;

  for (const auto& [state, children] : uniform_children_) {
    if (spec.table.contains(state)) continue;
    const bool terminal = uniform_terminal_.contains(state);
    const double n = static_cast<double>(children.size() + (terminal ? 1 : 0));
    NextTokenDistribution next;
    for (const std::string& tok : children) next[tok] = 1.0 / n;
    if (terminal) next[end_marker_] += 1.0 / n;
    spec.table.emplace(state, std::move(next));
  }

  for (auto& [state, next] : spec.table) {
    double total = 0.0;
    for (const auto& [tok, p] : next) total += p;
    if (total > 1.0 + kNormalizationTolerance) {
      throw Error(ErrorCode::kInvalidArgument,
                  "toy LM builder: mass at " + DescribePrefix(state) +
                      " exceeds 1");
    }
    // Unassigned mass ends the sequence.
    if (total < 1.0) next[end_marker_] += 1.0 - total;
  }

  std::size_t max_len = 1;
  for (const auto& [state, next] : spec.table) {
    for (const auto& [tok, p] : next) {
      if (p > 0.0 && tok != end_marker_) {
        max_len = std::max(max_len, state.size() + 1);
      }
    }
  }
  spec.max_len = max_len;
  // States at max_len are terminal and carry no entry.
  std::erase_if(spec.table, [&](const auto& entry) { return entry.first.size() >= max_len; });

  std::vector<std::pair<TokenSequence, NextTokenDistribution>> additions;
  for (const auto& [state, next] : spec.table) {
    for (const auto& [tok, p] : next) {
      if (p <= 0.0 || tok == end_marker_) continue;
      TokenSequence child = state;
      child.push_back(tok);
      if (child.size() < max_len && !spec.table.contains(child)) {
        additions.emplace_back(std::move(child),
                               NextTokenDistribution{{end_marker_, 1.0}});
      }
    }
  }
  for (auto& [state, next] : additions) spec.table.emplace(state, next);
  if (!spec.table.contains(TokenSequence{})) {
    spec.table.emplace(TokenSequence{},
                       NextTokenDistribution{{end_marker_, 1.0}});
  }

  std::set<std::string> vocab{end_marker_};
  for (const auto& [state, next] : spec.table) {
    vocab.insert(state.begin(), state.end());
    for (const auto& [tok, p] : next) vocab.insert(tok);
  }
  spec.vocabulary.assign(vocab.begin(), vocab.end());
  ValidateToyLmSpec(spec);
  return spec;
}

}  // namespace sfc
