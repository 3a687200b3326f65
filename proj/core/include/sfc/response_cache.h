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

// Persistent cache of backend scores.
//
// The cache is an append-only log, one record per line:
//
//   <checksum> <json>\n
//
// where the JSON holds the key, the scored strings and the raw token and
// log-probability arrays, and the checksum is the first 16 hex digits of
// SHA-256 over the JSON text. Records that fail the checksum or do not parse
// are skipped on load; a later miss on that key rescores and appends a fresh
// record. The key is SHA-256 over (model_id, context, continuation).

#ifndef SFC_RESPONSE_CACHE_H_
#define SFC_RESPONSE_CACHE_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "sfc/backend.h"

namespace sfc {

inline constexpr std::string_view kCacheDirEnv = "SFC_CACHE_DIR";
inline constexpr std::string_view kCacheFileName = "scores.log";

enum class CacheMode { kReadWrite, kReadOnly };

struct CacheStats {
  std::uint64_t records = 0;
  std::uint64_t corrupted = 0;
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t writes = 0;
};

struct CacheRecord {
  std::string key;
  std::string continuation;
  BackendScore score;
};

class ResponseCache {
 public:
  // Opens (creating in read-write mode) the log at `path`.
  ResponseCache(std::filesystem::path path, CacheMode mode);

  // Flag value wins; otherwise $SFC_CACHE_DIR; otherwise nullopt.
  static std::optional<std::filesystem::path> ResolveDirectory(
      const std::optional<std::filesystem::path>& flag);

  static std::string Key(std::string_view model_id, std::string_view context,
                         std::string_view continuation);

  std::optional<BackendScore> Get(std::string_view model_id,
                                  std::string_view context,
                                  std::string_view continuation);

  // No-op in read-only mode.
  void Put(std::string_view continuation, const BackendScore& score);

  void ForEach(const std::function<void(const CacheRecord&)>& fn) const;

  CacheMode mode() const { return mode_; }
  const std::filesystem::path& path() const { return path_; }
  CacheStats stats() const;

 private:
  void Load();

  std::filesystem::path path_;
  CacheMode mode_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, CacheRecord> index_;
  std::ofstream log_;
  std::uint64_t corrupted_ = 0;
  std::uint64_t writes_ = 0;
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> misses_{0};
};

// Serves scores from a cache, falling back to (and persisting from) an inner
// backend on a miss. With no inner backend a miss is kOfflineMiss.
class CachedBackend : public Backend {
 public:
  CachedBackend(std::shared_ptr<ResponseCache> cache,
                std::shared_ptr<Backend> inner, std::string model_id);

  BackendScore ScoreContinuation(std::string_view context,
                                 std::string_view continuation) override;
  std::string model_id() const override { return model_id_; }

  // Calls forwarded to the inner backend.
  std::uint64_t backend_calls() const { return backend_calls_.load(); }

 private:
  std::shared_ptr<ResponseCache> cache_;
  std::shared_ptr<Backend> inner_;
  std::string model_id_;
  std::atomic<std::uint64_t> backend_calls_{0};
};

}  // namespace sfc

#endif  // SFC_RESPONSE_CACHE_H_
