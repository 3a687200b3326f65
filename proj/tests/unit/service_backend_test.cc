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


#include "sfc/service_backend.h"

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "mock_service.h"
#include "sfc/error.h"
#include "test_support.h"

namespace sfc {
namespace {

using test_support::MockCompletionService;
using test_support::ThrownCode;

ServiceBackendConfig ConfigFor(const MockCompletionService& mock) {
  ServiceBackendConfig config;
  config.base_url = mock.base_url();
  config.model = "mock-125m";
  config.backoff_base = std::chrono::milliseconds(1);
  config.backoff_max = std::chrono::milliseconds(4);
  config.timeout = std::chrono::milliseconds(5000);
  config.auth_env = "SFC_TEST_SERVICE_KEY";
  return config;
}

EchoedCompletion Completion(std::vector<std::string> tokens) {
  EchoedCompletion c;
  c.tokens = std::move(tokens);
  c.logprobs.push_back(std::nullopt);
  for (std::size_t i = 1; i < c.tokens.size(); ++i) c.logprobs.push_back(-1.0 * i);
  return c;
}

TEST(ParseCompletionResponseTest, ReadsTokensAndNullLogprobs) {
  const EchoedCompletion c = ParseCompletionResponse(
      R"({"choices":[{"logprobs":{"tokens":["a"," b"],"token_logprobs":[null,-0.5]}}]})");
  EXPECT_EQ(c.tokens, (std::vector<std::string>{"a", " b"}));
  EXPECT_FALSE(c.logprobs[0].has_value());
  EXPECT_EQ(*c.logprobs[1], -0.5);
}

TEST(ParseCompletionResponseTest, MalformedBodiesAreTransportErrors) {
  EXPECT_EQ(ThrownCode([] { ParseCompletionResponse("not json"); }),
            ErrorCode::kTransport);
  EXPECT_EQ(ThrownCode([] { ParseCompletionResponse(R"({"choices":[]})"); }),
            ErrorCode::kTransport);
  EXPECT_EQ(ThrownCode([] {
              ParseCompletionResponse(
                  R"({"choices":[{"logprobs":{"tokens":["a"],"token_logprobs":[]}}]})");
            }),
            ErrorCode::kTransport);
}

TEST(SliceContinuationTest, SlicesAtTheBoundary) {
  const BackendScore s = SliceContinuation(Completion({"The", " cat", " sat"}),
                                           "The cat sat", 3, "m", "The");
  EXPECT_EQ(s.tokens, (std::vector<std::string>{" cat", " sat"}));
  EXPECT_EQ(s.logprobs.values(), (std::vector<double>{-1.0, -2.0}));
  EXPECT_EQ(s.context_echo, "The");
}

TEST(SliceContinuationTest, StraddlingTokenIsABoundarySplit) {
  EXPECT_EQ(ThrownCode([] {
              SliceContinuation(Completion({"Th", "e c", "at"}), "The cat", 3, "m",
                                "The");
            }),
            ErrorCode::kBoundarySplit);
}

TEST(SliceContinuationTest, EchoMismatchAndEmptyHypothesis) {
  EXPECT_EQ(ThrownCode([] {
              SliceContinuation(Completion({"The", " dog"}), "The cat", 3, "m",
                                "The");
            }),
            ErrorCode::kTransport);
  EXPECT_EQ(ThrownCode([] {
              SliceContinuation(Completion({"The"}), "The", 3, "m", "The");
            }),
            ErrorCode::kEmptyHypothesis);
}

TEST(ServiceBackendConfigTest, ValidationFailuresAreConfigErrors) {
  ServiceBackendConfig config;
  config.model = "m";
  config.Validate();
  auto expect_config = [](ServiceBackendConfig c) {
    EXPECT_EQ(ThrownCode([&] { c.Validate(); }), ErrorCode::kConfig);
  };
  ServiceBackendConfig c = config;
  c.parallelism = 0;
  expect_config(c);
  c = config;
  c.model.clear();
  expect_config(c);
  c = config;
  c.echo = false;
  expect_config(c);
  c = config;
  c.base_url = "localhost:8000";
  expect_config(c);
  c = config;
  c.max_retries = -1;
  expect_config(c);
}

class ServiceBackendTest : public ::testing::Test {
 protected:
  void SetUp() override { mock_.Start(); }
  MockCompletionService mock_;
};

TEST_F(ServiceBackendTest, ScoresEchoedContinuation) {
  ServiceBackend backend(ConfigFor(mock_));
  const BackendScore s = backend.ScoreContinuation("The bar closed because",
                                                   " it was 3 AM.");
  EXPECT_EQ(s.tokens, (std::vector<std::string>{" it", " was", " 3", " AM."}));
  ASSERT_EQ(s.logprobs.token_count(), 4u);
  EXPECT_DOUBLE_EQ(s.logprobs.values()[0], MockCompletionService::TokenLogProb(" it"));
  EXPECT_EQ(s.model_id, "mock-125m");
  EXPECT_EQ(backend.requests_sent(), 1u);
}

TEST_F(ServiceBackendTest, EmptyContextUsesDocumentStart) {
  ServiceBackend backend(ConfigFor(mock_));
  const BackendScore s = backend.ScoreContinuation("", " yes.");
  EXPECT_EQ(s.tokens, (std::vector<std::string>{" yes."}));
  EXPECT_EQ(s.context_echo, "");
}

TEST_F(ServiceBackendTest, RetriesRateLimitsAndServerErrors) {
  mock_.InjectStatuses({429, 500, 503});
  ServiceBackend backend(ConfigFor(mock_));
  const BackendScore s = backend.ScoreContinuation("a", " b");
  EXPECT_EQ(s.tokens, (std::vector<std::string>{" b"}));
  EXPECT_EQ(backend.requests_sent(), 4u);
  EXPECT_EQ(mock_.failures_served(), 3u);
}

TEST_F(ServiceBackendTest, ExhaustedRetriesReportLastStatus) {
  mock_.InjectStatuses({500, 500, 429});
  ServiceBackendConfig config = ConfigFor(mock_);
  config.max_retries = 2;
  ServiceBackend backend(config);
  try {
    backend.ScoreContinuation("a", " b");
    FAIL() << "expected a transport error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
    EXPECT_EQ(e.http_status(), 429);
    EXPECT_TRUE(e.is_backend_failure());
  }
  EXPECT_EQ(backend.requests_sent(), 3u);
}

TEST_F(ServiceBackendTest, ClientErrorsAreNotRetried) {
  mock_.InjectStatuses({400});
  ServiceBackend backend(ConfigFor(mock_));
  EXPECT_EQ(ThrownCode([&] { backend.ScoreContinuation("a", " b"); }),
            ErrorCode::kTransport);
  EXPECT_EQ(backend.requests_sent(), 1u);
}

TEST_F(ServiceBackendTest, ConnectionFailureIsTransportError) {
  ServiceBackendConfig config = ConfigFor(mock_);
  mock_.Stop();
  config.max_retries = 1;
  ServiceBackend backend(config);
  EXPECT_EQ(ThrownCode([&] { backend.ScoreContinuation("a", " b"); }),
            ErrorCode::kTransport);
}

TEST_F(ServiceBackendTest, HonorsParallelismCap) {
  mock_.set_latency(std::chrono::milliseconds(20));
  ServiceBackendConfig config = ConfigFor(mock_);
  config.parallelism = 2;
  ServiceBackend backend(config);
  std::vector<std::jthread> threads;
  for (int i = 0; i < 12; ++i) {
    threads.emplace_back([&backend, i] {
      backend.ScoreContinuation("ctx " + std::to_string(i), " word");
    });
  }
  threads.clear();
  EXPECT_EQ(mock_.requests(), 12u);
  EXPECT_LE(mock_.max_in_flight(), 2);
  EXPECT_GE(mock_.max_in_flight(), 1);
}

TEST_F(ServiceBackendTest, BoundarySplitFromService) {
  mock_.set_tokenizer([](std::string_view text) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < text.size(); i += 4) {
      out.emplace_back(text.substr(i, 4));
    }
    return out;
  });
  ServiceBackend backend(ConfigFor(mock_));
  EXPECT_EQ(ThrownCode([&] { backend.ScoreContinuation("abcdef", " g"); }),
            ErrorCode::kBoundarySplit);
}

TEST_F(ServiceBackendTest, SendsBearerTokenFromEnvironment) {
  ::setenv("SFC_TEST_SERVICE_KEY", "secret-token", 1);
  ServiceBackend backend(ConfigFor(mock_));
  backend.ScoreContinuation("a", " b");
  ::unsetenv("SFC_TEST_SERVICE_KEY");
  backend.ScoreContinuation("a", " b");
  const auto headers = mock_.authorization_headers();
  ASSERT_EQ(headers.size(), 2u);
  EXPECT_EQ(headers[0], "Bearer secret-token");
  EXPECT_EQ(headers[1], "");
}

}  // namespace
}  // namespace sfc
