// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace posthoc {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kSchema,
  kDegenerate,
  kNumerical,
  kProtocol,
  kTimeout,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure raised by the library. The code lets callers (the CLI in
// particular) map failures to exit codes without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace posthoc
