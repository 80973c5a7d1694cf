#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace augtrack {

enum class ErrorCode {
  invalid_spec,
  invalid_order,
  invalid_rate,
  empty_model,
  derivative_too_high,
  unstable_request,
  unobservable_system,
  unobservable_output,
  singular_matrix,
  evaluation_on_pole,
  no_convergence,
  unsupported_derivative,
  singular_fixed_point,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::invalid_order: return "invalid-order";
    case ErrorCode::invalid_rate: return "invalid-rate";
    case ErrorCode::empty_model: return "empty-model";
    case ErrorCode::derivative_too_high: return "derivative-too-high";
    case ErrorCode::unstable_request: return "unstable-request";
    case ErrorCode::unobservable_system: return "unobservable-system";
    case ErrorCode::unobservable_output: return "unobservable-output";
    case ErrorCode::singular_matrix: return "singular-matrix";
    case ErrorCode::evaluation_on_pole: return "evaluation-on-pole";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::unsupported_derivative: return "unsupported-derivative";
    case ErrorCode::singular_fixed_point: return "singular-fixed-point";
  }
  return "unknown";
}

}  // namespace augtrack
