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

#ifndef SFC_ERROR_H_
#define SFC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sfc {

// Broad failure classes. The CLI maps these onto process exit codes, so new
// codes must be added to ExitCodeFor() as well.
enum class ErrorCode {
  kInvalidArgument,
  kConfig,
  kDataFormat,
  kNotFound,
  kEmptyHypothesis,
  kTokenizationDrift,
  kNotRepresentable,
  kBoundarySplit,
  kIncompleteTable,
  kOfflineMiss,
  kTransport,
  kThresholdExceeded,
  kNotFlippable,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int http_status = 0)
      : std::runtime_error(message), code_(code), http_status_(http_status) {}

  ErrorCode code() const { return code_; }
  // Last HTTP status seen for transport errors, 0 otherwise.
  int http_status() const { return http_status_; }

  // True for failures caused by the scoring backend rather than by the
  // caller's configuration or data.
  bool is_backend_failure() const;

 private:
  ErrorCode code_;
  int http_status_;
};

// Exit code contract: 0 ok, 1 configuration/data, 2 backend/transport,
// 3 errored-instance threshold exceeded.
int ExitCodeFor(ErrorCode code);

}  // namespace sfc

#endif  // SFC_ERROR_H_
