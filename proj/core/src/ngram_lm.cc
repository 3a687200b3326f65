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

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "sfc/error.h"
#include "text.h"

namespace sfc {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<std::string> Words(std::string_view text) {
  std::vector<std::string> out;
  for (const std::string& piece : WhitespacePieces(text)) {
    std::string w = text::Trim(piece);
    if (!w.empty()) out.push_back(std::move(w));
  }
  return out;
}

std::string JoinKey(const std::vector<std::string>& words, std::size_t begin,
                    std::size_t end) {
  std::string key;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) key += ' ';
    key += words[i];
  }
  return key;
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kNotFound, "cannot open n-gram corpus " + path.string());
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string NGramModelId(const NGramLmSpec& spec) {
  std::ostringstream id;
  id << "ngram:order=" << spec.order << ":k=" << spec.k << ":"
     << spec.corpus.filename().string();
  return id.str();
}

}  // namespace

std::vector<std::string> WhitespacePieces(std::string_view text) {
  std::vector<std::string> pieces;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t start = pos;
    while (pos < text.size() && IsSpace(text[pos])) ++pos;
    if (pos == text.size()) {
      // Trailing whitespace belongs to the previous piece.
      if (pieces.empty()) {
        pieces.emplace_back(text.substr(start));
      } else {
        pieces.back() += text.substr(start);
      }
      break;
    }
    while (pos < text.size() && !IsSpace(text[pos])) ++pos;
    pieces.emplace_back(text.substr(start, pos - start));
  }
  return pieces;
}

NGramModel::NGramModel(int order, double k,
                       const std::vector<std::string>& sentences)
    : order_(order), k_(k) {
  if (order < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");
  }
  if (!(k > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "n-gram smoothing constant must be positive");
  }
  std::set<std::string> vocab{std::string(kUnknownWord)};
  std::vector<std::vector<std::string>> tokenized;
  for (const std::string& line : sentences) {
    std::vector<std::string> words = Words(line);
    if (words.empty()) continue;
    vocab.insert(words.begin(), words.end());
    tokenized.push_back(std::move(words));
  }
  vocabulary_.assign(vocab.begin(), vocab.end());
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    word_ids_.emplace(vocabulary_[i], i);
  }

  const std::size_t n = static_cast<std::size_t>(order_);
  for (const auto& words : tokenized) {
    std::vector<std::string> padded(n - 1, std::string(kSentenceStart));
    padded.insert(padded.end(), words.begin(), words.end());
    for (std::size_t i = n - 1; i < padded.size(); ++i) {
      const std::size_t h = i - (n - 1);
      history_counts_[JoinKey(padded, h, i)] += 1.0;
      ngram_counts_[JoinKey(padded, h, i + 1)] += 1.0;
    }
  }
}

std::string NGramModel::Normalize(std::string_view word) const {
  if (word == kSentenceStart) return std::string(word);
  return word_ids_.contains(word) ? std::string(word) : std::string(kUnknownWord);
}

double NGramModel::Probability(const std::vector<std::string>& history,
                               std::string_view word) const {
  const std::size_t n = static_cast<std::size_t>(order_);
  std::vector<std::string> padded(n - 1, std::string(kSentenceStart));
  for (const std::string& w : history) padded.push_back(Normalize(w));
  std::vector<std::string> window(padded.end() - static_cast<std::ptrdiff_t>(n - 1),
                                  padded.end());
  const std::string history_key = JoinKey(window, 0, window.size());
  window.push_back(Normalize(word));
  const std::string ngram_key = JoinKey(window, 0, window.size());

  auto hc = history_counts_.find(history_key);
  auto nc = ngram_counts_.find(ngram_key);
  const double history_count = hc == history_counts_.end() ? 0.0 : hc->second;
  const double ngram_count = nc == ngram_counts_.end() ? 0.0 : nc->second;
  return (ngram_count + k_) /
         (history_count + k_ * static_cast<double>(vocabulary_.size()));
}

NGramBackend::NGramBackend(const NGramLmSpec& spec)
    : model_(spec.order, spec.k, ReadLines(spec.corpus)),
      model_id_(NGramModelId(spec)) {}

NGramBackend::NGramBackend(int order, double k,
                           const std::vector<std::string>& sentences,
                           std::string model_id)
    : model_(order, k, sentences), model_id_(std::move(model_id)) {}

BackendScore NGramBackend::ScoreContinuation(std::string_view context,
                                             std::string_view continuation) {
  std::vector<std::string> pieces = WhitespacePieces(continuation);
  std::vector<std::string> history = Words(context);
  std::vector<double> logprobs;
  for (const std::string& piece : pieces) {
    const std::string word = text::Trim(piece);
    if (word.empty()) {
      throw Error(ErrorCode::kNotRepresentable,
                  "continuation \"" + std::string(continuation) +
                      "\" has no words for the n-gram model");
    }
    logprobs.push_back(LogProbFromProbability(model_.Probability(history, word)));
    history.push_back(word);
  }
  if (pieces.empty()) {
    throw Error(ErrorCode::kEmptyHypothesis, "empty hypothesis");
  }
  return BackendScore{std::move(pieces), TokenLogProbs(std::move(logprobs)),
                      model_id_, std::string(context)};
}

}  // namespace sfc
