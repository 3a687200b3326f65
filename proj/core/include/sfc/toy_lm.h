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

// A fully tabulated finite language model.
//
// States are keyed by the complete token prefix (no history truncation), so
// every string probability the model assigns can be recovered exactly, either
// through the chain rule (ToyBackend) or by enumerating all complete
// sequences (see enumeration.h). The vocabulary must be prefix-free: no token
// may be a proper prefix of another. This gives every string at most one
// tokenization.

#ifndef SFC_TOY_LM_H_
#define SFC_TOY_LM_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sfc/backend.h"

namespace sfc {

using TokenSequence = std::vector<std::string>;
using NextTokenDistribution = std::map<std::string, double>;

struct ToyLmSpec {
  std::string model_id = "toy";
  std::string end_marker = "</s>";
  // Includes end_marker.
  std::vector<std::string> vocabulary;
  std::map<TokenSequence, NextTokenDistribution> table;
  // Maximum number of non-end tokens in a sequence. Prefixes of this length
  // are terminal and need no table entry.
  std::size_t max_len = 0;
};

// Checks vocabulary, normalization (1e-12), prefix-freeness and that every
// prefix reachable from the empty state has an entry.
void ValidateToyLmSpec(const ToyLmSpec& spec);

// JSON layout:
//   {"model_id": "...", "end_marker": "</s>", "max_len": 4,
//    "vocabulary": ["a", "b", "</s>"],
//    "table": [{"prefix": [], "next": {"a": 0.5, "b": 0.5}}, ...]}
nlohmann::json ToyLmSpecToJson(const ToyLmSpec& spec);
ToyLmSpec ToyLmSpecFromJson(const nlohmann::json& j);
ToyLmSpec LoadToyLmSpec(const std::filesystem::path& path);
void SaveToyLmSpec(const ToyLmSpec& spec, const std::filesystem::path& path);

class ToyLanguageModel {
 public:
  // Validates the spec.
  explicit ToyLanguageModel(ToyLmSpec spec);

  const ToyLmSpec& spec() const { return spec_; }

  // Unique tokenization over the prefix-free vocabulary. Throws
  // kNotRepresentable when some position matches no token.
  TokenSequence Tokenize(std::string_view text) const;

  // Throws kIncompleteTable if the state has no entry.
  const NextTokenDistribution& NextDistribution(
      std::span<const std::string> prefix) const;

  double NextProbability(std::span<const std::string> prefix,
                         const std::string& token) const;

 private:
  ToyLmSpec spec_;
  std::size_t longest_token_ = 0;
  std::map<std::string, std::size_t, std::less<>> token_index_;
};

class ToyBackend : public Backend {
 public:
  explicit ToyBackend(ToyLmSpec spec) : model_(std::move(spec)) {}

  BackendScore ScoreContinuation(std::string_view context,
                                 std::string_view continuation) override;
  std::string model_id() const override { return model_.spec().model_id; }

  const ToyLanguageModel& model() const { return model_; }

 private:
  const ToyLanguageModel model_;
};

// Incremental construction of complete toy specs. Probability mass left
// unassigned at a state goes to the end marker, and every child state reached
// with non-zero probability gets an entry (end marker with probability 1)
// unless one was set explicitly.
class ToyLmBuilder {
 public:
  explicit ToyLmBuilder(std::string model_id, std::string end_marker = "</s>");

  ToyLmBuilder& Set(const TokenSequence& prefix, const std::string& token,
                    double probability);
  ToyLmBuilder& SetDistribution(const TokenSequence& prefix,
                                const NextTokenDistribution& next);
  // Adds every token prefix of `path` with uniform branching among the
  // children seen so far. Used to build toy models that cover a corpus.
  ToyLmBuilder& AddUniformPath(const TokenSequence& path);

  ToyLmSpec Build() const;

 private:
  std::string model_id_;
  std::string end_marker_;
  std::map<TokenSequence, NextTokenDistribution> table_;
  std::map<TokenSequence, std::vector<std::string>> uniform_children_;
  std::map<TokenSequence, bool> uniform_terminal_;
};

}  // namespace sfc

#endif  // SFC_TOY_LM_H_
