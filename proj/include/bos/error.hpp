#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bos {

enum class ErrorCode {
  invalid_argument,
  regime_violation,
  dimension_mismatch,
  aliasing,
  quadrature_non_convergence,
  solver_breakdown,
  near_eigenvalue,
  eigensolver_failure,
  io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures of a numerical procedure rather than of the input.
  bool is_numerical() const noexcept {
    return code_ == ErrorCode::quadrature_non_convergence ||
           code_ == ErrorCode::solver_breakdown ||
           code_ == ErrorCode::eigensolver_failure;
  }

 private:
  ErrorCode code_;
};

}  // namespace bos
