#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsl {

enum class ErrorCode {
  kInvalidInput,
  kInvalidOrder,
  kDimensionMismatch,
  kNonphysicalState,
  kQubitOnly,
  kIntegrationFailure,
  kQuadratureFailure,
  kPrecondition,
  kUnsupportedSchedule,
  kUndefinedDirection,
  kProfile,
  kInternalConsistency,
  kRelativePurity,
  kParse,
  kUnknownChannel,
  kIo,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. The code lets
/// callers (the batch runner, tests) branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Adaptive quadrature hit its node cap; carries the best estimate so far.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& message, double best_estimate, double error_estimate);

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace qsl
