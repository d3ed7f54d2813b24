/*
 * Copyright 2026 The verfu Authors.
 *
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

#ifndef VERFU_STATUS_H_
#define VERFU_STATUS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace verfu {

enum class ErrorCode {
  kNotInvertible,
  kMessageOutOfRange,
  kInvalidCiphertext,
  kLengthMismatch,
  kDimMismatch,
  kCoordinateOutOfRange,
  kOutOfBound,
  kDuplicateDevice,
  kMissingDevice,
  kMissingOpening,
  kEmptyCohort,
  kDivisionByZero,
  kTargetNotInCohort,
  kTrapdoorRequired,
  kInvalidArgument,
  kInvalidConfig,
  kMalformedTranscript,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (notably the CLI exit-code mapping) can branch on it.
class VerfuError : public std::runtime_error {
 public:
  VerfuError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace verfu

#endif  // VERFU_STATUS_H_
