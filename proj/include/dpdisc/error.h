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

#ifndef DPDISC_ERROR_H_
#define DPDISC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpdisc {

enum class ErrorCode {
  kInvalidParameter,
  kEmptyData,
  kBudgetOverspend,
  kExtractionFailed,
  kOutOfRange,
  kLengthMismatch,
  kParse,
  kNoTarget,
  kFeatureExplosion,
  kUndefinedRatio,
  kDegenerate,
  kValidation,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as this exception. The code lets callers and
// tests distinguish failure classes without matching on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) Fail(code, message);
}

}  // namespace dpdisc

#endif  // DPDISC_ERROR_H_
