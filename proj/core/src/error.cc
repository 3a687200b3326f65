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

#include "sfc/error.h"

namespace sfc {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kDataFormat: return "data_format";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kEmptyHypothesis: return "empty_hypothesis";
    case ErrorCode::kTokenizationDrift: return "tokenization_drift";
    case ErrorCode::kNotRepresentable: return "not_representable";
    case ErrorCode::kBoundarySplit: return "boundary_split";
    case ErrorCode::kIncompleteTable: return "incomplete_table";
    case ErrorCode::kOfflineMiss: return "offline_miss";
    case ErrorCode::kTransport: return "transport";
    case ErrorCode::kThresholdExceeded: return "threshold_exceeded";
    case ErrorCode::kNotFlippable: return "not_flippable";
  }
  return "unknown";
}

bool Error::is_backend_failure() const {
  switch (code_) {
    case ErrorCode::kTransport:
    case ErrorCode::kOfflineMiss:
    case ErrorCode::kBoundarySplit:
    case ErrorCode::kNotRepresentable:
    case ErrorCode::kIncompleteTable:
    case ErrorCode::kTokenizationDrift:
    case ErrorCode::kEmptyHypothesis:
      return true;
    default:
      return false;
  }
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kTransport:
    case ErrorCode::kOfflineMiss:
    case ErrorCode::kBoundarySplit:
    case ErrorCode::kNotRepresentable:
    case ErrorCode::kIncompleteTable:
    case ErrorCode::kTokenizationDrift:
      return 2;
    case ErrorCode::kThresholdExceeded:
      return 3;
    default:
      return 1;
  }
}

}  // namespace sfc
