#include "bos/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "bos/error.hpp"

namespace bos {

TridiagonalLU::TridiagonalLU(std::vector<cplx> sub, std::vector<cplx> diag,
                             std::vector<cplx> super)
    : dl_(std::move(sub)), d_(std::move(diag)), du_(std::move(super)) {
  const std::size_t n = d_.size();
  if (n == 0 || dl_.size() + 1 != n || du_.size() + 1 != n) {
    throw Error(ErrorCode::dimension_mismatch, "tridiagonal band lengths disagree");
  }
  du2_.assign(n >= 2 ? n - 2 : 0, 0.0);
  pivot_.assign(n, 0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d_[i]) >= std::abs(dl_[i])) {
      pivot_[i] = int(i);
      if (d_[i] != 0.0) {
        const cplx fact = dl_[i] / d_[i];
        dl_[i] = fact;
        d_[i + 1] -= fact * du_[i];
      }
    } else {
      pivot_[i] = int(i + 1);
      const cplx fact = d_[i] / dl_[i];
      d_[i] = dl_[i];
      dl_[i] = fact;
      const cplx temp = du_[i];
      du_[i] = d_[i + 1];
      d_[i + 1] = temp - fact * d_[i + 1];
      if (i + 2 < n) {
        du2_[i] = du_[i + 1];
        du_[i + 1] = -fact * du_[i + 1];
      }
    }
  }
  pivot_[n - 1] = int(n - 1);
  for (const auto& p : d_) {
    if (p == 0.0) throw Error(ErrorCode::solver_breakdown, "singular tridiagonal matrix");
  }
}

Eigen::VectorXcd TridiagonalLU::solve(const Eigen::VectorXcd& rhs) const {
  const std::size_t n = d_.size();
  if (std::size_t(rhs.size()) != n) {
    throw Error(ErrorCode::dimension_mismatch, "right-hand side length mismatch");
  }
  Eigen::VectorXcd x = rhs;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (pivot_[i] == int(i)) {
      x[i + 1] -= dl_[i] * x[i];
    } else {
      const cplx temp = x[i];
      x[i] = x[i + 1];
      x[i + 1] = temp - dl_[i] * x[i];
    }
  }
  x[n - 1] /= d_[n - 1];
  if (n >= 2) x[n - 2] = (x[n - 2] - du_[n - 2] * x[n - 1]) / d_[n - 2];
  for (std::size_t k = n >= 2 ? n - 2 : 0; k-- > 0;) {
    x[k] = (x[k] - du_[k] * x[k + 1] - du2_[k] * x[k + 2]) / d_[k];
  }
  return x;
}

double TridiagonalLU::pivot_ratio() const {
  double lo = std::abs(d_[0]), hi = lo;
  for (const auto& p : d_) {
    lo = std::min(lo, std::abs(p));
    hi = std::max(hi, std::abs(p));
  }
  return lo / hi;
}

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace bos
