// Copyright 2026 The fcmtune Authors.
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

#ifndef FCMTUNE_ERROR_H_
#define FCMTUNE_ERROR_H_

#include <stdexcept>
#include <string>

namespace fcmtune {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kFormat,
  kIo,
  kNumeric,
};

const char *ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline Error InvalidArgument(const std::string &message) {
  return Error(ErrorCode::kInvalidArgument, message);
}

// Raised by ParseSequence; carries the offending character and its offset.
class ParseError : public Error {
 public:
  ParseError(char c, size_t offset);
  char character() const { return character_; }
  size_t offset() const { return offset_; }

 private:
  char character_;
  size_t offset_;
};

}  // namespace fcmtune

#endif  // FCMTUNE_ERROR_H_
