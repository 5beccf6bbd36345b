#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "bos/fourier.hpp"
#include "bos/operators.hpp"
#include "bos/params.hpp"

namespace bos {

/// L assembled column by column from pointwise values of
/// l[e^{inx}] = (a sin x + i n (1 + (b - a) cos x) - b n^2 sin x) e^{inx}
/// projected by the K-point trapezoidal rule. Independent of the stencils in
/// assemble(); used as the reference for the factorization check.
Eigen::MatrixXcd quadrature_assemble_l(const OperatorParams& p, int N, int K = 4096);

struct FactorizationCheck {
  /// max |L_quad - S M| over columns |n| <= N-1
  double interior = 0.0;
  /// same over all columns, edge included
  double full = 0.0;
};

FactorizationCheck factorization_residual(const OperatorParams& p, int N,
                                          int quadrature_points = 4096);

// --- L0 (+) L1 block structure -------------------------------------------------

/// Position of mode n (n != 0) inside the 2N-dimensional mean-zero block.
inline int l1_index(int n, int N) { return n < 0 ? n + N : n + N - 1; }
inline int l1_mode(int i, int N) { return i < N ? i - N : i - N + 1; }

/// Delete row and column of mode 0.
Eigen::MatrixXcd delete_mean(const Eigen::MatrixXcd& full, int N);
Eigen::VectorXcd mean_free_part(const FourierVector& f);
FourierVector from_mean_free(const Eigen::VectorXcd& v, int N, cplx mean = 0.0);

struct BlockDecomposition {
  int N = 0;
  /// Image of the constant 1 under L: a sin x, modes +-1 only.
  FourierVector l10_image;
  Eigen::MatrixXcd l11;
};

BlockDecomposition block_decompose(const OperatorParams& p, int N);

struct L11Inverse {
  Eigen::MatrixXcd inverse;
  /// max |L11 L11^{-1} - I|
  double residual = 0.0;
  /// 1-norm condition number estimate from the LU
  double condition = 0.0;
};

/// Dense inverse of the truncated L11. Throws Error(solver_breakdown) when
/// the residual exceeds 1e-8.
L11Inverse l11_inverse_direct(const OperatorParams& p, int N);

/// The pair {1, z0} of the hyperplane construction.
struct HyperplanePair {
  FourierVector x1;  // the constant 1
  FourierVector x2;  // z0
  /// (x1, x2) / (||x1|| ||x2||)
  cplx alpha;
  /// (1, z0) unnormalized
  cplx one_dot_z0;
};

HyperplanePair make_hyperplane_pair(const OperatorParams& p, int N);

/// Inverse of the projection onto mean-zero functions restricted to
/// {z0}^perp: adds the constant c = -(u, z0)/(1, z0).
FourierVector lift_to_hyperplane(const FourierVector& u, const HyperplanePair& pair);

struct ComposedStages {
  FourierVector antiderivative;  // S^{-1} g on mean-zero functions
  FourierVector lifted;          // orthogonal to z0
  FourierVector solution;        // M^{-1} of lifted
  cplx shift = 0.0;
};

/// L11^{-1} g as M^{-1} (P1|_{z0^perp})^{-1} S^{-1} g. g must be mean-zero to
/// 1e-12 relative; throws Error(invalid_argument) otherwise and
/// Error(solver_breakdown) when |(1, z0)| < 1e-12.
ComposedStages l11_inverse_composed_stages(const OperatorParams& p, int N,
                                           const FourierVector& g);
FourierVector l11_inverse_composed(const OperatorParams& p, int N,
                                   const FourierVector& g);

/// Resolvent R_lambda(T) = (T - lambda)^{-1} of the truncated L, assembled
/// from the block formula
///   y0 = -f0 / lambda,
///   y1 = R_lambda(L11) f1 + (1/lambda) R_lambda(L11) L10 f0.
struct ResolventSolver {
  ResolventSolver(const OperatorParams& p, int N, cplx lambda);

  FourierVector operator()(const FourierVector& f) const;

  /// max-norm residual of (L_N - lambda) y - f
  double residual(const FourierVector& f, const FourierVector& y) const;

  cplx lambda() const noexcept { return lambda_; }
  /// Distance from lambda to the nearest eigenvalue of L_N (0 included).
  double eigen_distance() const noexcept { return eigen_distance_; }

 private:
  int N_;
  cplx lambda_;
  BandedOperatorMatrix L_;
  FourierVector l10_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  double eigen_distance_ = 0.0;
};

/// Throws Error(near_eigenvalue) when lambda lies within 1e-8 ||L_N|| of a
/// truncated eigenvalue.
FourierVector resolvent_apply(const OperatorParams& p, int N, cplx lambda,
                              const FourierVector& f);

/// Dense solve (L_N - lambda) y = f, the reference for the block formula.
FourierVector resolvent_dense(const OperatorParams& p, int N, cplx lambda,
                              const FourierVector& f);

struct HsEntry {
  int N;
  double frobenius;
};

/// Frobenius norms of L11_N^{-1} over an ascending list of truncations.
std::vector<HsEntry> hs_norm_estimate(const OperatorParams& p,
                                      const std::vector<int>& N_list);

/// Log-log slope of the row norms of L11_N^{-1} against |n| over
/// lo <= |n| <= hi (defaults: 8 .. N/2).
double hs_row_slope(const OperatorParams& p, int N, int lo = 8, int hi = -1);

}  // namespace bos
