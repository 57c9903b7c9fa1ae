// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The rczf-mimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace rczf {

enum class ErrorCode {
  kInvalidInput,
  kRankDeficient,
  kDecomposition,
  kDimensionMismatch,
  kIllConditioned,
  kInfeasibleZeroForcing,
  kSingular,
  kNeedsExternalNoise,
  kUniquenessPrecondition,
  kGeneration,
  kParse,
  kConfig,
  kIo,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Configuration-level failures (bad input files, infeasible scheme
  /// combinations) as opposed to numerical failures during computation.
  bool is_config_error() const noexcept {
    return code_ == ErrorCode::kParse || code_ == ErrorCode::kConfig ||
           code_ == ErrorCode::kIo;
  }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kRankDeficient: return "rank deficiency";
    case ErrorCode::kDecomposition: return "decomposition failure";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kIllConditioned: return "ill-conditioned channel";
    case ErrorCode::kInfeasibleZeroForcing: return "infeasible zero forcing";
    case ErrorCode::kSingular: return "singular matrix";
    case ErrorCode::kNeedsExternalNoise: return "needs external noise";
    case ErrorCode::kUniquenessPrecondition: return "uniqueness precondition";
    case ErrorCode::kGeneration: return "channel generation";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown";
}

}  // namespace rczf
