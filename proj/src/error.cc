// Copyright 2026 The NRE Authors.
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

#include "error.h"

namespace nre {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidUtf8: return "InvalidUtf8";
    case ErrorCode::kEmptyPositive: return "EmptyPositive";
    case ErrorCode::kUnbalancedGroup: return "UnbalancedGroup";
    case ErrorCode::kDanglingGapOperator: return "DanglingGapOperator";
    case ErrorCode::kMalformedGap: return "MalformedGap";
    case ErrorCode::kUnsupportedSyntax: return "UnsupportedSyntax";
    case ErrorCode::kSecondSeparator: return "SecondSeparator";
    case ErrorCode::kEmptyBranch: return "EmptyBranch";
    case ErrorCode::kBareAlternation: return "BareAlternation";
    case ErrorCode::kEmptyLabel: return "EmptyLabel";
    case ErrorCode::kStackUnderflow: return "StackUnderflow";
    case ErrorCode::kTrailingValues: return "TrailingValues";
    case ErrorCode::kMisplacedOutput: return "MisplacedOutput";
    case ErrorCode::kMixedPolarityOr: return "MixedPolarityOr";
    case ErrorCode::kMixedPolarityOrdered: return "MixedPolarityOrdered";
    case ErrorCode::kNegativeOutput: return "NegativeOutput";
    case ErrorCode::kInvalidDistance: return "InvalidDistance";
    case ErrorCode::kCaseEmpty: return "CaseEmpty";
    case ErrorCode::kMatcherFailure: return "MatcherFailure";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kPolarityMismatch: return "PolarityMismatch";
    case ErrorCode::kBadHeader: return "BadHeader";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kEmptyPattern: return "EmptyPattern";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kBadCheckpoint: return "BadCheckpoint";
    case ErrorCode::kMissingScorer: return "MissingScorer";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kBadLine: return "BadLine";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kRatioSum: return "RatioSum";
    case ErrorCode::kUnknownRule: return "UnknownRule";
    case ErrorCode::kUnknownCase: return "UnknownCase";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t position)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code),
      position_(position) {}

Error Error::WithContext(const std::string& context) const {
  std::string message = what();
  // Strip our own "Name: " prefix so it is not repeated.
  const std::string prefix = std::string(ErrorCodeName(code_)) + ": ";
  if (message.compare(0, prefix.size(), prefix) == 0) {
    message.erase(0, prefix.size());
  }
  return Error(code_, context + ": " + message, position_);
}

}  // namespace nre
