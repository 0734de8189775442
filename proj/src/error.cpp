#include "cellkit/error.hpp"

namespace cellkit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::GroupMismatch: return "GroupMismatch";
    case ErrorCode::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorCode::InfiniteParabolic: return "InfiniteParabolic";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::DivisionFailure: return "DivisionFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::FormatViolation: return "FormatViolation";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::GroupMismatch:
    case ErrorCode::UnsupportedFamily:
    case ErrorCode::InfiniteParabolic:
    case ErrorCode::SizeMismatch:
    case ErrorCode::ShapeMismatch:
      return 2;
    case ErrorCode::TruncationInsufficient:
      return 3;
    case ErrorCode::ResourceLimit:
      return 4;
    case ErrorCode::DivisionFailure:
    case ErrorCode::Overflow:
    case ErrorCode::InvariantViolation:
      return 5;
    case ErrorCode::SolveFailure:
    case ErrorCode::IoFailure:
    case ErrorCode::FormatViolation:
      return 1;
  }
  return 1;
}

}  // namespace cellkit
