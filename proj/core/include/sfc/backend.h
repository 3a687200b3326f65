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

#ifndef SFC_BACKEND_H_
#define SFC_BACKEND_H_

#include <string>
#include <string_view>
#include <vector>

#include "sfc/scoring.h"

namespace sfc {

// Per-token log-probabilities of a continuation given a context.
// tokens[j] is aligned with logprobs.values()[j] and the concatenation of
// tokens is byte-equal to the scored continuation.
struct BackendScore {
  std::vector<std::string> tokens;
  TokenLogProbs logprobs;
  std::string model_id;
  std::string context_echo;

  friend bool operator==(const BackendScore&, const BackendScore&) = default;
};

// A source of conditional token log-probabilities. Implementations must be
// safe to call from several threads at once.
class Backend {
 public:
  virtual ~Backend() = default;

  // logprobs[j] = log P(token_j | context + tokens[0..j)). The context may be
  // empty; the continuation may not.
  virtual BackendScore ScoreContinuation(std::string_view context,
                                         std::string_view continuation) = 0;

  virtual std::string model_id() const = 0;
};

}  // namespace sfc

#endif  // SFC_BACKEND_H_
