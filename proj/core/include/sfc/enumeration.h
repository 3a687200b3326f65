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

// Brute-force probabilities of a toy LM by enumerating every complete
// sequence. Matching is done on detokenized text, never through the toy
// tokenizer, so these values are an independent check on the chain-rule
// scores that ToyBackend reports.

#ifndef SFC_ENUMERATION_H_
#define SFC_ENUMERATION_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sfc/toy_lm.h"

namespace sfc {

struct EnumeratedSequence {
  TokenSequence tokens;  // without the end marker
  std::string text;
  // text.size() at each token boundary; offsets[0] == 0.
  std::vector<std::size_t> offsets;
  double probability = 0.0;
};

class SequenceEnumeration {
 public:
  // Walks the whole table. Throws kIncompleteTable when a reachable state has
  // no entry.
  explicit SequenceEnumeration(const ToyLmSpec& spec);

  const std::vector<EnumeratedSequence>& sequences() const { return sequences_; }
  double TotalProbability() const;

  // Probability that generated text starts with `prefix`.
  double PrefixProbability(std::string_view prefix) const;

  // P(target | prefix) = P(text starts with prefix+target) / P(starts with
  // prefix). Throws kInvalidArgument when the prefix has zero probability.
  double ConditionalProbability(std::string_view prefix,
                                std::string_view target) const;

  // Probability that the text following the first `position` tokens starts
  // with `target`, summed over all prefixes of that length.
  double MarginalAtPosition(std::size_t position, std::string_view target) const;

  // Joint probability that the first `position` tokens spell `premise` and
  // the text after them starts with `target`.
  double JointAtPosition(std::string_view premise, std::size_t position,
                         std::string_view target) const;

  // P(premise | target follows at `position`). Throws kInvalidArgument when
  // the target never appears at that position.
  double PremiseGivenContinuation(std::string_view premise, std::size_t position,
                                  std::string_view target) const;

 private:
  std::vector<EnumeratedSequence> sequences_;
};

// One-shot form of SequenceEnumeration::ConditionalProbability.
double EnumerateSequenceProbability(const ToyLmSpec& spec,
                                    std::string_view prefix,
                                    std::string_view target);

}  // namespace sfc

#endif  // SFC_ENUMERATION_H_
