#include "minimax/errors.hpp"

namespace minimax {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kSingularYYBlock: return "SingularYYBlock";
    case ErrorKind::kNonFiniteIterate: return "NonFiniteIterate";
    case ErrorKind::kInvalidAccuracy: return "InvalidAccuracy";
    case ErrorKind::kNumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::kSingularLMSystem: return "SingularLMSystem";
    case ErrorKind::kOutsideDomain: return "OutsideDomain";
    case ErrorKind::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kIO: return "IOError";
    case ErrorKind::kParse: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace minimax
