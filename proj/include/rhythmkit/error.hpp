// Copyright 2026 The Rhythmkit Authors
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

#ifndef RHYTHMKIT_ERROR_HPP_
#define RHYTHMKIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace rhythmkit {

enum class ErrorCode {
  kFileNotFound,
  kUnsupportedFormat,
  kEmptyAudio,
  kNoMatchingSegments,
  kSegmentOutOfRange,
  kDegenerateSignal,
  kTooShort,
  kLengthMismatch,
  kEmptySlice,
  kTooFewSlices,
  kOrderTooLarge,
  kSingleClass,
  kDimensionMismatch,
  kHeterogeneousModels,
  kZeroVariance,
  kTooFewSamples,
  kDuplicateId,
  kMalformedRow,
  kUnknownLabel,
  kInvalidSpec,
  kIoError,
  kLayoutMismatch,
  kMalformedCsv,
  kInvalidArgument,
};

const char* ErrorCodeName(ErrorCode code);

// Single exception type carrying a machine-readable code; the CLI maps it
// to a one-line JSON diagnostic and exit code 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void Raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) Raise(code, message);
}

}  // namespace rhythmkit

#endif  // RHYTHMKIT_ERROR_HPP_
