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

#ifndef NRE_ERROR_H_
#define NRE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace nre {

enum class ErrorCode {
  // Rule dialect.
  kInvalidUtf8,
  kEmptyPositive,
  kUnbalancedGroup,
  kDanglingGapOperator,
  kMalformedGap,
  kUnsupportedSyntax,
  kSecondSeparator,
  kEmptyBranch,
  kBareAlternation,
  kEmptyLabel,
  // Layout.
  kStackUnderflow,
  kTrailingValues,
  kMisplacedOutput,
  kMixedPolarityOr,
  kMixedPolarityOrdered,
  kNegativeOutput,
  kInvalidDistance,
  kCaseEmpty,
  kMatcherFailure,
  // Label algebra.
  kLengthMismatch,
  kPolarityMismatch,
  // Soft find.
  kBadHeader,
  kDimensionMismatch,
  kEmptyTable,
  kShapeMismatch,
  kEmptyPattern,
  kNonFiniteLoss,
  kNonFiniteGradient,
  kBadCheckpoint,
  kMissingScorer,
  // Engine and IO.
  kEmptyCorpus,
  kBadLine,
  kDuplicateId,
  kRatioSum,
  kUnknownRule,
  kUnknownCase,
  kIo,
  kConfig,
  kInvalidArgument,
};

// Stable name of an error code, e.g. "UnbalancedGroup".
std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  static constexpr std::size_t kNoPosition = static_cast<std::size_t>(-1);

  Error(ErrorCode code, const std::string& message,
        std::size_t position = kNoPosition);

  ErrorCode code() const { return code_; }

  // Byte offset, instruction index or line number, depending on the code.
  std::size_t position() const { return position_; }

  // Returns a copy whose message is prefixed with `context`.
  Error WithContext(const std::string& context) const;

 private:
  ErrorCode code_;
  std::size_t position_;
};

}  // namespace nre

#endif  // NRE_ERROR_H_
