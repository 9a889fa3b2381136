#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace minimax {

enum class ErrorKind {
  kInvalidArgument,
  kDimensionMismatch,
  kSingularYYBlock,
  kNonFiniteIterate,
  kInvalidAccuracy,
  kNumericalBreakdown,
  kConvergenceFailure,
  kSingularLMSystem,
  kOutsideDomain,
  kNotPositiveDefinite,
  kConfig,
  kIO,
  kParse,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace minimax
