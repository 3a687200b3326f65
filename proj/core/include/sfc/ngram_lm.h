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

#ifndef SFC_NGRAM_LM_H_
#define SFC_NGRAM_LM_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sfc/backend.h"

namespace sfc {

inline constexpr std::string_view kUnknownWord = "<unk>";
inline constexpr std::string_view kSentenceStart = "<s>";

struct NGramLmSpec {
  int order = 2;
  double k = 1.0;
  // Each line is one sentence of whitespace-separated words.
  std::filesystem::path corpus;
};

// Splits text into whitespace-delimited words, keeping each word's leading
// whitespace attached so that the pieces concatenate back to `text`. Trailing
// whitespace is attached to the last piece.
std::vector<std::string> WhitespacePieces(std::string_view text);

// Add-k smoothed n-gram model over a closed vocabulary (corpus words plus
// <unk>). Out-of-vocabulary words are scored as <unk>.
//
//   P(w | h) = (c(h w) + k) / (c(h) + k |V|)
//
// where h is the previous order-1 words, padded with <s> at the start of the
// context. Immutable after construction.
class NGramModel {
 public:
  NGramModel(int order, double k, const std::vector<std::string>& sentences);

  int order() const { return order_; }
  double k() const { return k_; }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  std::string Normalize(std::string_view word) const;
  double Probability(const std::vector<std::string>& history,
                     std::string_view word) const;

 private:
  int order_;
  double k_;
  std::vector<std::string> vocabulary_;
  std::map<std::string, std::size_t, std::less<>> word_ids_;
  // Keys are space-joined histories (possibly empty) and history+word.
  std::map<std::string, double, std::less<>> history_counts_;
  std::map<std::string, double, std::less<>> ngram_counts_;
};

class NGramBackend : public Backend {
 public:
  explicit NGramBackend(const NGramLmSpec& spec);
  NGramBackend(int order, double k, const std::vector<std::string>& sentences,
               std::string model_id);

  BackendScore ScoreContinuation(std::string_view context,
                                 std::string_view continuation) override;
  std::string model_id() const override { return model_id_; }

  const NGramModel& model() const { return model_; }

 private:
  NGramModel model_;
  std::string model_id_;
};

}  // namespace sfc

#endif  // SFC_NGRAM_LM_H_
