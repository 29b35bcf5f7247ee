// Copyright 2026 The mpx Authors.
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

#include "mpx/error.hpp"

namespace mpx {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBoundaryViolation: return "BoundaryViolation";
    case ErrorCode::kNonPositiveStep: return "NonPositiveStep";
    case ErrorCode::kRootFindFailure: return "RootFindFailure";
    case ErrorCode::kUnboundedSet: return "UnboundedSet";
    case ErrorCode::kIncompatibleGeometry: return "IncompatibleGeometry";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kNotPsd: return "NotPSD";
    case ErrorCode::kDimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::kCouplingTooLarge: return "CouplingTooLarge";
    case ErrorCode::kIterationBudgetZero: return "IterationBudgetZero";
    case ErrorCode::kMissingConstant: return "MissingConstant";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kNonPositiveGap: return "NonPositiveGap";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kUnknownProblem: return "UnknownProblem";
    case ErrorCode::kIoFailure: return "IOFailure";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace mpx
