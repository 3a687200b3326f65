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
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "sfc/error.h"
#include "test_support.h"

namespace sfc {
namespace {

using test_support::FakeBackend;
using test_support::ThrownCode;

class ResponseCacheTest : public ::testing::Test {
 protected:
  void SetUp() override { dir_ = test_support::MakeTempDir("cache"); }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path log() const { return dir_ / std::string(kCacheFileName); }

  std::filesystem::path dir_;
};

BackendScore SampleScore() {
  return BackendScore{{" it", " was"}, TokenLogProbs({-0.25, -1.5}), "m",
                      "The bar closed because"};
}

TEST_F(ResponseCacheTest, KeyDependsOnEveryField) {
  const std::string k = ResponseCache::Key("m", "ab", "c");
  EXPECT_EQ(k.size(), 64u);
  EXPECT_NE(k, ResponseCache::Key("m", "a", "bc"));
  EXPECT_NE(k, ResponseCache::Key("n", "ab", "c"));
  EXPECT_EQ(k, ResponseCache::Key("m", "ab", "c"));
}

TEST_F(ResponseCacheTest, PutThenGetAcrossReopen) {
  {
    ResponseCache cache(log(), CacheMode::kReadWrite);
    EXPECT_FALSE(cache.Get("m", "The bar closed because", " it was").has_value());
    cache.Put(" it was", SampleScore());
    EXPECT_EQ(cache.Get("m", "The bar closed because", " it was"), SampleScore());
  }
  ResponseCache reopened(log(), CacheMode::kReadOnly);
  EXPECT_EQ(reopened.Get("m", "The bar closed because", " it was"), SampleScore());
  EXPECT_FALSE(reopened.Get("other", "The bar closed because", " it was"));
  EXPECT_EQ(reopened.stats().records, 1u);
  EXPECT_EQ(reopened.stats().hits, 1u);
  EXPECT_EQ(reopened.stats().misses, 1u);
}

TEST_F(ResponseCacheTest, RecordFormatIsChecksumThenJson) {
  {
    ResponseCache cache(log(), CacheMode::kReadWrite);
    cache.Put(" it was", SampleScore());
  }
  std::ifstream in(log());
  std::string line;
  std::getline(in, line);
  ASSERT_GT(line.size(), 17u);
  EXPECT_EQ(line[16], ' ');
  EXPECT_EQ(line[17], '{');
}

TEST_F(ResponseCacheTest, CorruptedRecordsAreSkippedAndRewritten) {
  {
    ResponseCache cache(log(), CacheMode::kReadWrite);
    cache.Put(" it was", SampleScore());
  }
  std::string contents;
  {
    std::ifstream in(log());
    std::getline(in, contents);
  }
  contents[20] = contents[20] == 'x' ? 'y' : 'x';
  {
    std::ofstream out(log(), std::ios::trunc);
    out << contents << "\n" << "garbage line\n" << "0123456789abcdef {\"torn\":";
  }
  ResponseCache cache(log(), CacheMode::kReadWrite);
  EXPECT_EQ(cache.stats().records, 0u);
  EXPECT_EQ(cache.stats().corrupted, 3u);
  EXPECT_FALSE(cache.Get("m", "The bar closed because", " it was"));
  cache.Put(" it was", SampleScore());
  ResponseCache reread(log(), CacheMode::kReadOnly);
  EXPECT_EQ(reread.stats().records, 1u);
  EXPECT_EQ(reread.Get("m", "The bar closed because", " it was"), SampleScore());
}

TEST_F(ResponseCacheTest, ReadOnlyNeverWrites) {
  { ResponseCache create(log(), CacheMode::kReadWrite); }
  ResponseCache cache(log(), CacheMode::kReadOnly);
  cache.Put(" it was", SampleScore());
  EXPECT_EQ(std::filesystem::file_size(log()), 0u);
  EXPECT_EQ(ThrownCode([&] { ResponseCache missing(dir_ / "nope.log", CacheMode::kReadOnly); }),
            ErrorCode::kNotFound);
}

TEST_F(ResponseCacheTest, DirectoryResolutionPrefersFlag) {
  ::setenv(std::string(kCacheDirEnv).c_str(), "/env/dir", 1);
  EXPECT_EQ(ResponseCache::ResolveDirectory(std::filesystem::path("/flag")),
            std::filesystem::path("/flag"));
  EXPECT_EQ(ResponseCache::ResolveDirectory(std::nullopt),
            std::filesystem::path("/env/dir"));
  ::unsetenv(std::string(kCacheDirEnv).c_str());
  EXPECT_FALSE(ResponseCache::ResolveDirectory(std::nullopt).has_value());
}

TEST_F(ResponseCacheTest, CachedBackendCallsInnerOncePerKey) {
  auto cache = std::make_shared<ResponseCache>(log(), CacheMode::kReadWrite);
  auto inner = std::make_shared<FakeBackend>("m");
  CachedBackend backend(cache, inner, "m");
  const BackendScore first = backend.ScoreContinuation("ctx", " a b");
  const BackendScore second = backend.ScoreContinuation("ctx", " a b");
  EXPECT_EQ(first, second);
  EXPECT_EQ(inner->calls(), 1u);
  EXPECT_EQ(backend.backend_calls(), 1u);
  backend.ScoreContinuation("ctx2", " a b");
  EXPECT_EQ(inner->calls(), 2u);
}

TEST_F(ResponseCacheTest, OfflineMissIsTyped) {
  auto cache = std::make_shared<ResponseCache>(log(), CacheMode::kReadWrite);
  CachedBackend warm(cache, std::make_shared<FakeBackend>("m"), "m");
  const BackendScore cached = warm.ScoreContinuation("ctx", " a");

  auto ro = std::make_shared<ResponseCache>(log(), CacheMode::kReadOnly);
  CachedBackend offline(ro, nullptr, "m");
  EXPECT_EQ(offline.ScoreContinuation("ctx", " a"), cached);
  EXPECT_EQ(ThrownCode([&] { offline.ScoreContinuation("ctx", " b"); }),
            ErrorCode::kOfflineMiss);
}

TEST_F(ResponseCacheTest, ConcurrentWritersProduceAValidLog) {
  auto cache = std::make_shared<ResponseCache>(log(), CacheMode::kReadWrite);
  CachedBackend backend(cache, std::make_shared<FakeBackend>("m"), "m");
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&backend, t] {
        for (int i = 0; i < 50; ++i) {
          backend.ScoreContinuation("ctx" + std::to_string((t * 50 + i) % 120), " w");
        }
      });
    }
  }
  ResponseCache reread(log(), CacheMode::kReadOnly);
  EXPECT_EQ(reread.stats().corrupted, 0u);
  EXPECT_EQ(reread.stats().records, 120u);
}

TEST_F(ResponseCacheTest, ForEachVisitsRecordsInKeyOrder) {
  ResponseCache cache(log(), CacheMode::kReadWrite);
  CachedBackend backend(std::shared_ptr<ResponseCache>(&cache, [](ResponseCache*) {}),
                        std::make_shared<FakeBackend>("m"), "m");
  for (int i = 0; i < 5; ++i) backend.ScoreContinuation(std::to_string(i), " x");
  std::vector<std::string> keys;
  cache.ForEach([&](const CacheRecord& r) { keys.push_back(r.key); });
  ASSERT_EQ(keys.size(), 5u);
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
}

}  // namespace
}  // namespace sfc
