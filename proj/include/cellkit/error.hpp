#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cellkit {

enum class ErrorCode {
  IndexOutOfRange,
  GroupMismatch,
  UnsupportedFamily,
  InfiniteParabolic,
  ResourceLimit,
  TruncationInsufficient,
  SizeMismatch,
  ShapeMismatch,
  SolveFailure,
  DivisionFailure,
  ParseError,
  IoFailure,
  FormatViolation,
  Overflow,
  InvariantViolation,
};

std::string_view error_code_name(ErrorCode code);

/// Exit status used by the command-line tool for a given error.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace cellkit
