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

#include "sfc/enumeration.h"

#include <string>

#include "sfc/error.h"

namespace sfc {
namespace {

void Expand(const ToyLmSpec& spec, EnumeratedSequence& current,
            std::vector<EnumeratedSequence>& out) {
  if (current.tokens.size() == spec.max_len) {
    out.push_back(current);
    return;
  }
  auto it = spec.table.find(current.tokens);
  if (it == spec.table.end()) {
    throw Error(ErrorCode::kIncompleteTable,
                "enumeration reached a state without a table entry at depth " +
                    std::to_string(current.tokens.size()));
  }
  for (const auto& [tok, p] : it->second) {
    if (p <= 0.0) continue;
    if (tok == spec.end_marker) {
      EnumeratedSequence done = current;
      done.probability *= p;
      out.push_back(std::move(done));
      continue;
    }
    const double saved = current.probability;
    current.tokens.push_back(tok);
    current.text += tok;
    current.offsets.push_back(current.text.size());
    current.probability = saved * p;
    Expand(spec, current, out);
    current.tokens.pop_back();
    current.text.resize(current.text.size() - tok.size());
    current.offsets.pop_back();
    current.probability = saved;
  }
}

}  // namespace

SequenceEnumeration::SequenceEnumeration(const ToyLmSpec& spec) {
  EnumeratedSequence root;
  root.offsets.push_back(0);
  root.probability = 1.0;
  Expand(spec, root, sequences_);
}

double SequenceEnumeration::TotalProbability() const {
  double total = 0.0;
  for (const auto& s : sequences_) total += s.probability;
  return total;
}

double SequenceEnumeration::PrefixProbability(std::string_view prefix) const {
  double total = 0.0;
  for (const auto& s : sequences_) {
    if (std::string_view(s.text).starts_with(prefix)) total += s.probability;
  }
  return total;
}

double SequenceEnumeration::ConditionalProbability(
    std::string_view prefix, std::string_view target) const {
  const std::string joined = std::string(prefix) + std::string(target);
  double numerator = 0.0;
  double denominator = 0.0;
  for (const auto& s : sequences_) {
    std::string_view text(s.text);
    if (!text.starts_with(prefix)) continue;
    denominator += s.probability;
    if (text.starts_with(joined)) numerator += s.probability;
  }
  if (denominator <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "prefix \"" + std::string(prefix) + "\" has zero probability");
  }
  return numerator / denominator;
}

double SequenceEnumeration::MarginalAtPosition(std::size_t position,
                                               std::string_view target) const {
  double total = 0.0;
  for (const auto& s : sequences_) {
    if (s.tokens.size() < position) continue;
    std::string_view rest = std::string_view(s.text).substr(s.offsets[position]);
    if (rest.starts_with(target)) total += s.probability;
  }
  return total;
}

double SequenceEnumeration::JointAtPosition(std::string_view premise,
                                            std::size_t position,
                                            std::string_view target) const {
  double total = 0.0;
  for (const auto& s : sequences_) {
    if (s.tokens.size() < position) continue;
    std::string_view text(s.text);
    if (text.substr(0, s.offsets[position]) != premise) continue;
    if (text.substr(s.offsets[position]).starts_with(target)) {
      total += s.probability;
    }
  }
  return total;
}

double SequenceEnumeration::PremiseGivenContinuation(
    std::string_view premise, std::size_t position,
    std::string_view target) const {
  const double marginal = MarginalAtPosition(position, target);
  if (marginal <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "\"" + std::string(target) + "\" never follows " +
                    std::to_string(position) + " tokens");
  }
  return JointAtPosition(premise, position, target) / marginal;
}

double EnumerateSequenceProbability(const ToyLmSpec& spec,
                                    std::string_view prefix,
                                    std::string_view target) {
  return SequenceEnumeration(spec).ConditionalProbability(prefix, target);
}

}  // namespace sfc
