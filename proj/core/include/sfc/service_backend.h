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

// Client for completions-style inference services.
//
// A continuation is scored by POSTing context+continuation with max_tokens 0
// and echoed prompt log-probabilities, then slicing the response at the byte
// offset where the continuation starts. If a returned token straddles that
// offset the call fails with kBoundarySplit instead of guessing.

#ifndef SFC_SERVICE_BACKEND_H_
#define SFC_SERVICE_BACKEND_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "sfc/backend.h"
#include "sfc/rate_limiter.h"

namespace sfc {

inline constexpr std::string_view kDefaultAuthEnv = "SFC_API_KEY";

struct ServiceBackendConfig {
  // scheme://host[:port][/path-prefix]
  std::string base_url = "http://127.0.0.1:8000";
  std::string endpoint = "/v1/completions";
  std::string model;
  // Name of the environment variable holding the bearer token. Unset or
  // empty variable means no Authorization header.
  std::string auth_env = std::string(kDefaultAuthEnv);
  std::chrono::milliseconds timeout{30000};
  int max_retries = 4;
  std::chrono::milliseconds backoff_base{200};
  std::chrono::milliseconds backoff_max{8000};
  int parallelism = 4;
  bool echo = true;
  // Token-bucket pacing; 0 disables.
  double requests_per_second = 0.0;
  double burst = 1.0;
  // Causal services cannot score the first token of a prompt, so an empty
  // context is replaced by this document-start string.
  std::string empty_context_prefix = "<|endoftext|>";
  std::uint64_t jitter_seed = 0x5eedULL;

  void Validate() const;
};

struct EchoedCompletion {
  std::vector<std::string> tokens;
  // nullopt where the service reports null (first prompt token).
  std::vector<std::optional<double>> logprobs;
};

// Parses {"choices": [{"logprobs": {"tokens": [...], "token_logprobs":
// [...]}}]}. Throws kTransport on a malformed body.
EchoedCompletion ParseCompletionResponse(std::string_view body);

// Returns the tokens at and after byte `boundary` of `prompt`.
BackendScore SliceContinuation(const EchoedCompletion& completion,
                               std::string_view prompt, std::size_t boundary,
                               std::string model_id, std::string context);

class ServiceBackend : public Backend {
 public:
  explicit ServiceBackend(ServiceBackendConfig config);
  ~ServiceBackend() override;

  BackendScore ScoreContinuation(std::string_view context,
                                 std::string_view continuation) override;
  std::string model_id() const override { return config_.model; }

  // HTTP requests issued, including retries.
  std::uint64_t requests_sent() const { return requests_sent_.load(); }

  const ServiceBackendConfig& config() const { return config_; }

 private:
  std::string PostWithRetries(const std::string& body);
  std::chrono::milliseconds BackoffDelay(int attempt);

  ServiceBackendConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::counting_semaphore<4096> in_flight_;
  TokenBucket pacing_;
  std::atomic<std::uint64_t> requests_sent_{0};
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
};

}  // namespace sfc

#endif  // SFC_SERVICE_BACKEND_H_
