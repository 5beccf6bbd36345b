#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bos/fourier.hpp"
#include "bos/params.hpp"

namespace bos {

/// Relative shift allowed between the N/2 and N truncations before an
/// eigenvalue counts as unconverged.
inline constexpr double kConvergenceTol = 1e-6;

struct SpectrumReport {
  double a = 0.0, b = 0.0;
  int N = 0;
  /// k smallest-magnitude eigenvalues of L11_N, sorted by (Im, Re).
  std::vector<cplx> eigenvalues;
  /// Distance to the nearest eigenvalue of the N/2 truncation.
  std::vector<double> stability;
  /// stability <= kConvergenceTol (1 + |lambda|)
  std::vector<bool> converged;
  /// Max |Re lambda| / (1 + |lambda|) over all reported / over converged ones.
  double max_real_part_ratio = 0.0;
  double trusted_max_real_part_ratio = 0.0;
  int trusted_count = 0;
  /// Smallest distance between distinct converged eigenvalues (infinity when
  /// fewer than two).
  double min_trusted_gap = 0.0;
  /// Reflection defect over trusted simple eigenfunctions; NaN unless a = 0.
  double symmetry_defect = 0.0;
  /// Every eigenvalue of L11_N (2N of them), sorted by (Im, Re).
  std::vector<cplx> all_eigenvalues;
};

/// Hausdorff distance between {lambda} and {-conj(lambda)}.
double conjugate_pair_defect(const std::vector<cplx>& eigenvalues);

/// Dense eigendecomposition of L11 at N and N/2. Requires 1 <= k <= N/2.
SpectrumReport compute_spectrum(const OperatorParams& p, int N, int k);

struct EigenPair {
  cplx value;
  FourierVector vector;  // mean-zero, unit coefficient 2-norm, gauge fixed
};

/// Rotate so the largest-magnitude coefficient is real and positive.
FourierVector gauge_fixed(const FourierVector& v);

/// ||y(-x) - conj(y(x))|| / ||y||; zero exactly when every c_n is real.
double reflection_defect(const FourierVector& v);

/// The k smallest-magnitude eigenpairs of L11_N with gauge-fixed vectors,
/// sorted like SpectrumReport::eigenvalues.
std::vector<EigenPair> smallest_eigenpairs(const OperatorParams& p, int N, int k);

struct SymmetryCheck {
  double max_defect = 0.0;
  int pairs_used = 0;
  int degenerate_excluded = 0;
  int unconverged_excluded = 0;
};

/// Reflection defect over the converged, simple eigenpairs among the k
/// smallest. Requires a = 0 (Error(invalid_argument) otherwise).
SymmetryCheck eigenfunction_symmetry_check(const OperatorParams& p, int N, int k);

/// (J c)_m = (-1)^m c_{-m}, the mode form of f(x) -> f(pi - x).
Eigen::MatrixXcd j_matrix(int N);

/// max |J L - L^H J| over rows and columns |n| <= N-1, for any a.
double j_symmetry_defect(const OperatorParams& p, int N);

/// Same, restricted to a = 0 where the operator is J-self-adjoint.
double j_symmetry_check(const OperatorParams& p, int N);

}  // namespace bos
