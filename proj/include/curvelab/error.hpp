#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvelab {

enum class ErrorCode {
  kInvalidSpec,
  kInvalidSchedule,
  kDimensionMismatch,
  kInsufficientData,
  kOutOfRegime,
  kOutOfInterval,
  kDegenerateStart,
  kInapplicable,
  kUnboundedStepsize,
  kInconsistentWitness,
  kInvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every precondition failure in the library surfaces as this type. Scientific
// findings (nonconvex curves, divergence) are reported in result values instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace curvelab
