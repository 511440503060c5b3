#include "nnmanifold/types.hpp"

namespace nnmanifold {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::SchemaViolation: return "SchemaViolation";
    case ErrorKind::LabelMismatch: return "LabelMismatch";
    case ErrorKind::RowCountMismatch: return "RowCountMismatch";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::MethodMismatch: return "MethodMismatch";
    case ErrorKind::MissingWeights: return "MissingWeights";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyClass: return "EmptyClass";
    case ErrorKind::DegenerateClass: return "DegenerateClass";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::DegenerateDistances: return "DegenerateDistances";
    case ErrorKind::TooFewNetworks: return "TooFewNetworks";
    case ErrorKind::TooManyPoints: return "TooManyPoints";
    case ErrorKind::BadRadius: return "BadRadius";
    case ErrorKind::BadK: return "BadK";
    case ErrorKind::InfinitePointMismatch: return "InfinitePointMismatch";
    case ErrorKind::InvalidSigma: return "InvalidSigma";
    case ErrorKind::ZeroRow: return "ZeroRow";
    case ErrorKind::EigenFailure: return "EigenFailure";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::DegenerateBandwidth: return "DegenerateBandwidth";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ZeroRow:
    case ErrorKind::EigenFailure:
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::DegenerateBandwidth:
      return true;
    default:
      return false;
  }
}

}  // namespace nnmanifold
