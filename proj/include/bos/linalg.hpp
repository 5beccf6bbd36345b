#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace bos {

/// LU factorization with partial pivoting of a complex tridiagonal matrix.
/// Row interchanges create one extra superdiagonal of fill-in.
class TridiagonalLU {
 public:
  using cplx = std::complex<double>;

  /// sub[i] = A(i+1, i), diag[i] = A(i, i), super[i] = A(i, i+1).
  /// Throws Error(solver_breakdown) on an exactly singular pivot.
  TridiagonalLU(std::vector<cplx> sub, std::vector<cplx> diag,
                std::vector<cplx> super);

  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

  Eigen::Index size() const noexcept { return Eigen::Index(d_.size()); }

  /// Crude reciprocal-condition proxy: min |U_ii| / max |U_ii|.
  double pivot_ratio() const;

 private:
  std::vector<cplx> dl_, d_, du_, du2_;
  std::vector<int> pivot_;
};

/// Largest absolute entry.
double max_abs(const Eigen::MatrixXcd& m);

}  // namespace bos
