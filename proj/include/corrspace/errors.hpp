// Copyright 2026 The corrspace Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace corrspace {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kUnknownLabel,
  kDuplicateLabel,
  kCapExceeded,
  kZeroProbability,
  kGroupTooLarge,
  kNotInGroup,
  kNonConvergence,
  kLatticeExhausted,
  kInvalidBranch,
  kOrthogonalityLost,
  kContractionMismatch,
  kStepCapExceeded,
  kParse,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kUnknownLabel: return "unknown_label";
    case ErrorCode::kDuplicateLabel: return "duplicate_label";
    case ErrorCode::kCapExceeded: return "cap_exceeded";
    case ErrorCode::kZeroProbability: return "zero_probability";
    case ErrorCode::kGroupTooLarge: return "group_possibly_infinite";
    case ErrorCode::kNotInGroup: return "not_in_group";
    case ErrorCode::kNonConvergence: return "non_convergence";
    case ErrorCode::kLatticeExhausted: return "lattice_exhausted";
    case ErrorCode::kInvalidBranch: return "invalid_branch";
    case ErrorCode::kOrthogonalityLost: return "orthogonality_lost";
    case ErrorCode::kContractionMismatch: return "contraction_mismatch";
    case ErrorCode::kStepCapExceeded: return "step_cap_exceeded";
    case ErrorCode::kParse: return "parse_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace corrspace
