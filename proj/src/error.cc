// Copyright 2026 The mslm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mslm/error.h"

namespace mslm {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShape: return "SHAPE";
    case ErrorCode::kNotPositiveDefinite: return "NOT_POSITIVE_DEFINITE";
    case ErrorCode::kNumeric: return "NUMERIC";
    case ErrorCode::kDegenerateDesign: return "DEGENERATE_DESIGN";
    case ErrorCode::kSampleSize: return "SAMPLE_SIZE";
    case ErrorCode::kDegreesOfFreedom: return "DEGREES_OF_FREEDOM";
    case ErrorCode::kDegenerateHypothesis: return "DEGENERATE_HYPOTHESIS";
    case ErrorCode::kParameter: return "PARAMETER";
    case ErrorCode::kBoundary: return "BOUNDARY";
    case ErrorCode::kParse: return "PARSE";
    case ErrorCode::kIo: return "IO";
  }
  return "UNKNOWN";
}

}  // namespace mslm
