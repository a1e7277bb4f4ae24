//
// Copyright 2026 The dpdisc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpdisc/error.h"

namespace dpdisc {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kEmptyData: return "empty-data";
    case ErrorCode::kBudgetOverspend: return "budget-overspend";
    case ErrorCode::kExtractionFailed: return "extraction-failed";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kNoTarget: return "no-target";
    case ErrorCode::kFeatureExplosion: return "feature-explosion";
    case ErrorCode::kUndefinedRatio: return "undefined-ratio";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace dpdisc
