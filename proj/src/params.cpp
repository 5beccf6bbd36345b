#include "bos/params.hpp"

#include <cmath>
#include <sstream>

#include "bos/error.hpp"

namespace bos {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::regime_violation: return "regime_violation";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::aliasing: return "aliasing";
    case ErrorCode::quadrature_non_convergence: return "quadrature_non_convergence";
    case ErrorCode::solver_breakdown: return "solver_breakdown";
    case ErrorCode::near_eigenvalue: return "near_eigenvalue";
    case ErrorCode::eigensolver_failure: return "eigensolver_failure";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

bool OperatorParams::admissible(double a, double b) noexcept {
  return std::isfinite(a) && std::isfinite(b) && a >= 0.0 && b > 0.0 &&
         2.0 * a + b < 2.0;
}

OperatorParams OperatorParams::validate(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::invalid_argument, "parameters must be finite");
  }
  std::ostringstream msg;
  if (a < 0.0) {
    msg << "a = " << a << " is negative";
    throw Error(ErrorCode::regime_violation, msg.str());
  }
  if (b <= 0.0) {
    msg << "b = " << b << " must be positive";
    throw Error(ErrorCode::regime_violation, msg.str());
  }
  if (2.0 * a + b >= 2.0) {
    msg << "2a + b = " << 2.0 * a + b << " violates 2a + b < 2";
    throw Error(ErrorCode::regime_violation, msg.str());
  }
  return OperatorParams(a, b);
}

}  // namespace bos
