/*
 * Copyright 2026 The hecredit Authors.
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

#ifndef HECREDIT_COMMON_ERROR_H_
#define HECREDIT_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace hecredit {

// Coarse classification of failures surfaced by every module. Callers switch
// on the code; the message is for humans and logs.
enum class ErrorCode {
  kInvalidArgument,
  kShapeMismatch,
  kLevelMismatch,
  kScaleMismatch,
  kOutOfRange,
  kMissingKey,
  kTruncated,
  kBadMagic,
  kUnsupportedVersion,
  kInconsistent,
  kParse,
  kSchema,
  kDegenerate,
  kIo,
  kTimeout,
  kUnavailable,
  kProtocol,
  kInternal,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hecredit

#endif  // HECREDIT_COMMON_ERROR_H_
