#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bos/fourier.hpp"
#include "bos/params.hpp"

namespace bos {

enum class OperatorKind { S, M, Mstar, D, C, L };

std::string_view to_string(OperatorKind kind);
/// Accepts "S", "M", "Mstar", "D", "C", "L"; throws Error(invalid_argument).
OperatorKind parse_operator_kind(std::string_view name);

/// Galerkin matrix of one of the six operators on modes -N..N.
///
/// Every kind couples mode n only to n-1, n, n+1, so the matrix is held as
/// three bands indexed by the input mode n:
///   to_lower(n) = A(n+1, n), diagonal(n) = A(n, n), to_upper(n) = A(n-1, n).
class BandedOperatorMatrix {
 public:
  BandedOperatorMatrix(int N, OperatorKind kind);

  int N() const noexcept { return N_; }
  OperatorKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return 2 * N_ + 1; }

  /// Entry with output mode m and input mode n; zero off the band.
  cplx entry(int m, int n) const;
  void set_entry(int m, int n, cplx value);

  Eigen::MatrixXcd dense() const;

  /// sub/diag/super arrays in storage order, for tridiagonal solvers.
  std::vector<cplx> sub_band() const;
  std::vector<cplx> diag_band() const;
  std::vector<cplx> super_band() const;

 private:
  int N_;
  OperatorKind kind_;
  std::vector<cplx> lower_;  // A(n+1, n), n = -N..N-1
  std::vector<cplx> diag_;   // A(n, n)
  std::vector<cplx> upper_;  // A(n-1, n), n = -N+1..N
};

/// Throws Error(invalid_argument) for N < 2.
BandedOperatorMatrix assemble(const OperatorParams& p, int N, OperatorKind kind);

/// Banded matrix-vector product; throws Error(dimension_mismatch).
FourierVector apply(const BandedOperatorMatrix& op, const FourierVector& y);

/// max |Mstar - M^H| with both sides assembled from their own stencils.
double adjoint_check(const OperatorParams& p, int N);

/// max |D - (M + M^H)/2|.
double hermitian_part_check(const OperatorParams& p, int N);

/// max |C - C^H|.
double c_hermitian_defect(const OperatorParams& p, int N);

/// Smallest eigenvalue of the (Hermitian) D matrix.
double d_min_eigenvalue(const OperatorParams& p, int N);

/// Coefficients of sin(x) * y on modes -(N+1)..N+1.
FourierVector multiply_by_sin(const FourierVector& y);

/// Coefficients of y' (diagonal i n).
FourierVector derivative(const FourierVector& y);

struct DomainDiagnostic {
  double h1_norm_sq = 0.0;
  /// ||sin(x) f'||^2 in H^1.
  double weighted_norm_sq = 0.0;
  double total_norm_sq = 0.0;
  /// Fitted log|c_n| vs log n slopes over the top trusted octave; 0 when the
  /// tail sits below the noise floor.
  double f_tail_slope = 0.0;
  double g_tail_slope = 0.0;
  bool in_domain = false;
};

/// Membership test for the domain {f in H^1 periodic, sin(x) f' in H^1}.
///
/// H^1 of a sequence c_n ~ n^p is finite iff p < -3/2; a tail is accepted when
/// its fitted slope is below -3/2 - 0.1. Coefficients below
/// noise_floor * max|c| are treated as zero.
DomainDiagnostic domain_membership(const FourierVector& y,
                                   double noise_floor = 1e-12);

}  // namespace bos
