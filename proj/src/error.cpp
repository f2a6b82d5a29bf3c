#include "qsl/error.hpp"

namespace qsl {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidOrder: return "invalid-order";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kNonphysicalState: return "nonphysical-state";
    case ErrorCode::kQubitOnly: return "qubit-only";
    case ErrorCode::kIntegrationFailure: return "integration-failure";
    case ErrorCode::kQuadratureFailure: return "quadrature-failure";
    case ErrorCode::kPrecondition: return "precondition";
    case ErrorCode::kUnsupportedSchedule: return "unsupported-schedule";
    case ErrorCode::kUndefinedDirection: return "undefined-direction";
    case ErrorCode::kProfile: return "profile";
    case ErrorCode::kInternalConsistency: return "internal-consistency";
    case ErrorCode::kRelativePurity: return "invalid-relative-purity";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kUnknownChannel: return "unknown-channel";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

QuadratureError::QuadratureError(const std::string& message, double best_estimate,
                                 double error_estimate)
    : Error(ErrorCode::kQuadratureFailure, message),
      best_estimate_(best_estimate),
      error_estimate_(error_estimate) {}

}  // namespace qsl
