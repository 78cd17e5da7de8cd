// SPDX-License-Identifier: Apache-2.0
#include "posthoc/error.hpp"

namespace posthoc {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kSchema:
      return "schema error";
    case ErrorCode::kDegenerate:
      return "degenerate input";
    case ErrorCode::kNumerical:
      return "numerical failure";
    case ErrorCode::kProtocol:
      return "protocol error";
    case ErrorCode::kTimeout:
      return "timeout";
    case ErrorCode::kIo:
      return "i/o error";
  }
  return "error";
}

}  // namespace posthoc
