/*
 * Copyright 2026 The Slidex Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "slidex/error.h"

namespace slidex {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kNonNumericCell: return "NonNumericCell";
    case ErrorCode::kMissingValue: return "MissingValue";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateClass: return "DegenerateClass";
    case ErrorCode::kTooFewDistinctValues: return "TooFewDistinctValues";
    case ErrorCode::kConstantSample: return "ConstantSample";
    case ErrorCode::kSampleSizeOutOfRange: return "SampleSizeOutOfRange";
    case ErrorCode::kZeroExpectedCell: return "ZeroExpectedCell";
    case ErrorCode::kSingleClassTrain: return "SingleClassTrain";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyTrain: return "EmptyTrain";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kClassSmallerThanK: return "ClassSmallerThanK";
    case ErrorCode::kNonPositiveCover: return "NonPositiveCover";
    case ErrorCode::kTooManyFeatures: return "TooManyFeatures";
    case ErrorCode::kDropCountOutOfRange: return "DropCountOutOfRange";
    case ErrorCode::kWrongModelKind: return "WrongModelKind";
    case ErrorCode::kSingleClassLabels: return "SingleClassLabels";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace slidex
