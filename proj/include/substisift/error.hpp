/* Copyright 2026 The SubstiSift Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SUBSTISIFT_ERROR_HPP_
#define SUBSTISIFT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace substisift {

enum class ErrorCode {
  kInvalidArgument,  // caller-side validation failure
  kIo,
  kParse,
  kRuntime,
  kNetwork,  // retriable
  kProtocol,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }
  bool retriable() const { return code_ == ErrorCode::kNetwork; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace substisift

#endif  // SUBSTISIFT_ERROR_HPP_
