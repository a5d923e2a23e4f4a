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

#include "rhythmkit/error.hpp"

namespace rhythmkit {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound: return "file_not_found";
    case ErrorCode::kUnsupportedFormat: return "unsupported_format";
    case ErrorCode::kEmptyAudio: return "empty_audio";
    case ErrorCode::kNoMatchingSegments: return "no_matching_segments";
    case ErrorCode::kSegmentOutOfRange: return "segment_out_of_range";
    case ErrorCode::kDegenerateSignal: return "degenerate_signal";
    case ErrorCode::kTooShort: return "too_short";
    case ErrorCode::kLengthMismatch: return "length_mismatch";
    case ErrorCode::kEmptySlice: return "empty_slice";
    case ErrorCode::kTooFewSlices: return "too_few_slices";
    case ErrorCode::kOrderTooLarge: return "order_too_large";
    case ErrorCode::kSingleClass: return "single_class";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kHeterogeneousModels: return "heterogeneous_models";
    case ErrorCode::kZeroVariance: return "zero_variance";
    case ErrorCode::kTooFewSamples: return "too_few_samples";
    case ErrorCode::kDuplicateId: return "duplicate_id";
    case ErrorCode::kMalformedRow: return "malformed_row";
    case ErrorCode::kUnknownLabel: return "unknown_label";
    case ErrorCode::kInvalidSpec: return "invalid_spec";
    case ErrorCode::kIoError: return "io_error";
    case ErrorCode::kLayoutMismatch: return "layout_mismatch";
    case ErrorCode::kMalformedCsv: return "malformed_csv";
    case ErrorCode::kInvalidArgument: return "invalid_argument";
  }
  return "unknown";
}

}  // namespace rhythmkit
