#include "umbrella/error.hpp"

namespace umbrella {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroEntry: return "ZeroEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::NotRankOne: return "NotRankOne";
    case ErrorCode::SolverInconsistency: return "SolverInconsistency";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace umbrella
