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

#include "sfc/response_cache.h"

#include <algorithm>
#include <cstdlib>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "sfc/error.h"
#include "text.h"

namespace sfc {
namespace {

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kInvalidArgument, "SHA-256 failed");
  }
  return text::HexEncode(
      std::string_view(reinterpret_cast<const char*>(digest), len));
}

std::string Checksum(std::string_view payload) {
  return Sha256Hex(payload).substr(0, 16);
}

std::string EncodeRecord(const CacheRecord& r) {
  const nlohmann::json j = {{"key", r.key},
                            {"model_id", r.score.model_id},
                            {"context", r.score.context_echo},
                            {"continuation", r.continuation},
                            {"tokens", r.score.tokens},
                            {"logprobs", r.score.logprobs.values()}};
  const std::string payload = j.dump();
  return Checksum(payload) + " " + payload + "\n";
}

std::optional<CacheRecord> DecodeRecord(std::string_view line) {
  const std::size_t space = line.find(' ');
  if (space != 16) return std::nullopt;
  const std::string_view payload = line.substr(space + 1);
  if (Checksum(payload) != line.substr(0, space)) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(payload);
    CacheRecord r;
    r.key = j.at("key").get<std::string>();
    r.continuation = j.at("continuation").get<std::string>();
    r.score.model_id = j.at("model_id").get<std::string>();
    r.score.context_echo = j.at("context").get<std::string>();
    r.score.tokens = j.at("tokens").get<std::vector<std::string>>();
    r.score.logprobs = TokenLogProbs(j.at("logprobs").get<std::vector<double>>());
    if (r.score.tokens.size() != r.score.logprobs.token_count()) {
      return std::nullopt;
    }
    if (r.key != ResponseCache::Key(r.score.model_id, r.score.context_echo,
                                    r.continuation)) {
      return std::nullopt;
    }
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

ResponseCache::ResponseCache(std::filesystem::path path, CacheMode mode)
    : path_(std::move(path)), mode_(mode) {
  if (mode_ == CacheMode::kReadWrite) {
    if (path_.has_parent_path()) {
      std::filesystem::create_directories(path_.parent_path());
    }
  } else if (!std::filesystem::exists(path_)) {
    throw Error(ErrorCode::kNotFound,
                "read-only cache " + path_.string() + " does not exist");
  }
  Load();
  if (mode_ == CacheMode::kReadWrite) {
    bool needs_newline = false;
    if (std::filesystem::exists(path_) && std::filesystem::file_size(path_) > 0) {
      std::ifstream in(path_, std::ios::binary);
      in.seekg(-1, std::ios::end);
      needs_newline = in.get() != '\n';
    }
    log_.open(path_, std::ios::binary | std::ios::app);
    if (!log_) {
      throw Error(ErrorCode::kNotFound, "cannot open cache " + path_.string());
    }
    // A torn final record must not swallow the next append.
    if (needs_newline) log_ << '\n' << std::flush;
  }
}

void ResponseCache::Load() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto record = DecodeRecord(line);
    if (!record) {
      ++corrupted_;
      continue;
    }
    std::string key = record->key;
    index_.insert_or_assign(std::move(key), std::move(*record));
  }
}

std::optional<std::filesystem::path> ResponseCache::ResolveDirectory(
    const std::optional<std::filesystem::path>& flag) {
  if (flag && !flag->empty()) return flag;
  if (const char* env = std::getenv(std::string(kCacheDirEnv).c_str());
      env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

std::string ResponseCache::Key(std::string_view model_id,
                               std::string_view context,
                               std::string_view continuation) {
  // Length-prefix each field so that no two triples share an encoding.
  std::string material;
  for (std::string_view field : {model_id, context, continuation}) {
    material += std::to_string(field.size());
    material += ':';
    material += field;
  }
  return Sha256Hex(material);
}

std::optional<BackendScore> ResponseCache::Get(std::string_view model_id,
                                               std::string_view context,
                                               std::string_view continuation) {
  const std::string key = Key(model_id, context, continuation);
  std::shared_lock lock(mu_);
  auto it = index_.find(key);
  if (it == index_.end() || it->second.score.model_id != model_id ||
      it->second.score.context_echo != context ||
      it->second.continuation != continuation) {
    misses_.fetch_add(1);
    return std::nullopt;
  }
  hits_.fetch_add(1);
  return it->second.score;
}

void ResponseCache::Put(std::string_view continuation,
                        const BackendScore& score) {
  if (mode_ == CacheMode::kReadOnly) return;
  CacheRecord record{Key(score.model_id, score.context_echo, continuation),
                     std::string(continuation), score};
  const std::string line = EncodeRecord(record);
  std::unique_lock lock(mu_);
  log_ << line << std::flush;
  if (!log_) {
    throw Error(ErrorCode::kNotFound, "failed writing cache " + path_.string());
  }
  ++writes_;
  std::string key = record.key;
  index_.insert_or_assign(std::move(key), std::move(record));
}

void ResponseCache::ForEach(
    const std::function<void(const CacheRecord&)>& fn) const {
  std::shared_lock lock(mu_);
  std::vector<const CacheRecord*> ordered;
  ordered.reserve(index_.size());
  for (const auto& [key, record] : index_) ordered.push_back(&record);
  std::sort(ordered.begin(), ordered.end(),
            [](const CacheRecord* a, const CacheRecord* b) { return a->key < b->key; });
  for (const CacheRecord* r : ordered) fn(*r);
}

CacheStats ResponseCache::stats() const {
  std::shared_lock lock(mu_);
  CacheStats s;
  s.records = index_.size();
  s.corrupted = corrupted_;
  s.hits = hits_.load();
  s.misses = misses_.load();
  s.writes = writes_;
  return s;
}

CachedBackend::CachedBackend(std::shared_ptr<ResponseCache> cache,
                             std::shared_ptr<Backend> inner,
                             std::string model_id)
    : cache_(std::move(cache)),
      inner_(std::move(inner)),
      model_id_(std::move(model_id)) {
  if (!cache_) {
    throw Error(ErrorCode::kInvalidArgument, "cached backend needs a cache");
  }
}

BackendScore CachedBackend::ScoreContinuation(std::string_view context,
                                              std::string_view continuation) {
  if (auto hit = cache_->Get(model_id_, context, continuation)) return *hit;
  if (!inner_) {
    throw Error(ErrorCode::kOfflineMiss,
                "offline miss: no cached score for model '" + model_id_ +
                    "' and no backend configured");
  }
  backend_calls_.fetch_add(1);
  BackendScore score = inner_->ScoreContinuation(context, continuation);
  score.model_id = model_id_;
  cache_->Put(continuation, score);
  return score;
}

}  // namespace sfc
