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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "sfc/service_backend.h"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>

#include "httplib.h"
#include "sfc/error.h"

namespace sfc {
namespace {

bool IsRetriable(int status) { return status == 429 || status >= 500; }

// Holds one slot of the in-flight semaphore for the current scope.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<4096>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  std::counting_semaphore<4096>& sem_;
};

}  // namespace

void ServiceBackendConfig::Validate() const {
  if (parallelism < 1 || parallelism > 4096) {
    throw Error(ErrorCode::kConfig, "parallelism cap must be in [1, 4096]");
  }
  if (max_retries < 0) {
    throw Error(ErrorCode::kConfig, "max retries must be non-negative");
  }
  if (model.empty()) {
    throw Error(ErrorCode::kConfig, "service backend needs a model name");
  }
  if (!echo) {
    throw Error(ErrorCode::kConfig,
                "service backend requires echo mode to read prompt "
                "log-probabilities");
  }
  if (!base_url.starts_with("http://") && !base_url.starts_with("https://")) {
    throw Error(ErrorCode::kConfig,
                "base URL must start with http:// or https://");
  }
}

EchoedCompletion ParseCompletionResponse(std::string_view body) {
  EchoedCompletion out;
  try {
    const auto j = nlohmann::json::parse(body);
    const auto& lp = j.at("choices").at(0).at("logprobs");
    out.tokens = lp.at("tokens").get<std::vector<std::string>>();
    for (const auto& v : lp.at("token_logprobs")) {
      if (v.is_null()) {
        out.logprobs.emplace_back(std::nullopt);
      } else {
        out.logprobs.emplace_back(v.get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kTransport,
                std::string("malformed completion response: ") + e.what());
  }
  if (out.tokens.size() != out.logprobs.size()) {
    throw Error(ErrorCode::kTransport,
                "completion response has mismatched tokens and logprobs");
  }
  return out;
}

BackendScore SliceContinuation(const EchoedCompletion& completion,
                               std::string_view prompt, std::size_t boundary,
                               std::string model_id, std::string context) {
  std::size_t offset = 0;
  std::size_t first = completion.tokens.size();
  for (std::size_t i = 0; i < completion.tokens.size(); ++i) {
    const std::size_t len = completion.tokens[i].size();
    if (offset == boundary && first == completion.tokens.size()) first = i;
    if (offset < boundary && offset + len > boundary) {
      throw Error(ErrorCode::kBoundarySplit,
                  "boundary split: token \"" + completion.tokens[i] +
                      "\" straddles the context/continuation boundary at byte " +
                      std::to_string(boundary) +
                      "; prepend a space to the continuation so it starts on "
                      "a token boundary");
    }
    offset += len;
  }
  std::string echoed;
  for (const auto& t : completion.tokens) echoed += t;
  if (echoed != prompt) {
    throw Error(ErrorCode::kTransport,
                "echoed tokens do not reconstruct the prompt");
  }
  if (first == completion.tokens.size()) {
    throw Error(ErrorCode::kEmptyHypothesis, "empty hypothesis");
  }
  std::vector<std::string> tokens;
  std::vector<double> logprobs;
  for (std::size_t i = first; i < completion.tokens.size(); ++i) {
    if (!completion.logprobs[i].has_value()) {
      throw Error(ErrorCode::kTransport,
                  "service returned no log-probability for continuation "
                  "token \"" + completion.tokens[i] + "\"");
    }
    tokens.push_back(completion.tokens[i]);
    logprobs.push_back(*completion.logprobs[i]);
  }
  return BackendScore{std::move(tokens), TokenLogProbs(std::move(logprobs)),
                      std::move(model_id), std::move(context)};
}

ServiceBackend::ServiceBackend(ServiceBackendConfig config)
    : config_(std::move(config)),
      in_flight_(std::clamp(config_.parallelism, 1, 4096)),
      pacing_(config_.requests_per_second, config_.burst),
      rng_(config_.jitter_seed) {
  config_.Validate();
  const std::size_t scheme_end = config_.base_url.find("://") + 3;
  const std::size_t path_start = config_.base_url.find('/', scheme_end);
  if (path_start == std::string::npos) {
    scheme_host_port_ = config_.base_url;
  } else {
    scheme_host_port_ = config_.base_url.substr(0, path_start);
    path_ = config_.base_url.substr(path_start);
    while (!path_.empty() && path_.back() == '/') path_.pop_back();
  }
  path_ += config_.endpoint;
}

ServiceBackend::~ServiceBackend() = default;

std::chrono::milliseconds ServiceBackend::BackoffDelay(int attempt) {
  const auto base = config_.backoff_base.count();
  const auto cap = config_.backoff_max.count();
  const double ceiling =
      static_cast<double>(std::min<long long>(cap, base << std::min(attempt, 20)));
  double jitter;
  {
    std::lock_guard<std::mutex> lock(rng_mu_);
    jitter = std::uniform_real_distribution<double>(0.5, 1.0)(rng_);
  }
  return std::chrono::milliseconds(static_cast<long long>(ceiling * jitter));
}

std::string ServiceBackend::PostWithRetries(const std::string& body) {
  httplib::Headers headers;
  if (!config_.auth_env.empty()) {
    if (const char* token = std::getenv(config_.auth_env.c_str());
        token != nullptr && *token != '\0') {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }
  int last_status = 0;
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(BackoffDelay(attempt - 1));
    pacing_.Acquire();
    httplib::Result res;
    {
      SlotGuard slot(in_flight_);
      httplib::Client client(scheme_host_port_);
      client.set_connection_timeout(config_.timeout);
      client.set_read_timeout(config_.timeout);
      client.set_write_timeout(config_.timeout);
      requests_sent_.fetch_add(1);
      res = client.Post(path_, headers, body, "application/json");
    }
    if (!res) {
      last_status = 0;
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return res->body;
    last_status = res->status;
    last_error = res->body.substr(0, 200);
    if (!IsRetriable(res->status)) break;
  }
  throw Error(ErrorCode::kTransport,
              "service request failed (HTTP " + std::to_string(last_status) +
                  "): " + last_error,
              last_status);
}

BackendScore ServiceBackend::ScoreContinuation(std::string_view context,
                                               std::string_view continuation) {
  if (continuation.empty()) {
    throw Error(ErrorCode::kEmptyHypothesis, "empty hypothesis");
  }
  const std::string prefix =
      context.empty() ? config_.empty_context_prefix : std::string(context);
  const std::string prompt = prefix + std::string(continuation);
  const nlohmann::json request = {{"model", config_.model},
                                  {"prompt", prompt},
                                  {"max_tokens", 0},
                                  {"echo", config_.echo},
                                  {"logprobs", 0},
                                  {"temperature", 0}};
  const std::string body = PostWithRetries(request.dump());
  return SliceContinuation(ParseCompletionResponse(body), prompt, prefix.size(),
                           config_.model, std::string(context));
}

}  // namespace sfc
