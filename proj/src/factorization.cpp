#include "bos/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bos/closed_form_inverse.hpp"
#include "bos/error.hpp"
#include "bos/kernels.hpp"
#include "bos/linalg.hpp"

namespace bos {

Eigen::MatrixXcd quadrature_assemble_l(const OperatorParams& p, int N, int K) {
  if (K < 2 * N + 3) {
    throw Error(ErrorCode::invalid_argument, "quadrature grid too coarse for exact projection");
  }
  return kernels::omp::quadrature_assemble_l({p.a(), p.b()}, N, K);
}

FactorizationCheck factorization_residual(const OperatorParams& p, int N,
                                          int quadrature_points) {
  const Eigen::MatrixXcd Lq = quadrature_assemble_l(p, N, quadrature_points);
  const Eigen::MatrixXcd S = assemble(p, N, OperatorKind::S).dense();
  const Eigen::MatrixXcd M = assemble(p, N, OperatorKind::M).dense();
  const Eigen::MatrixXcd diff = Lq - S * M;
  FactorizationCheck r;
  r.full = max_abs(diff);
  r.interior = max_abs(diff.middleCols(1, 2 * N - 1));
  return r;
}

Eigen::MatrixXcd delete_mean(const Eigen::MatrixXcd& full, int N) {
  const int K = 2 * N;
  Eigen::MatrixXcd out(K, K);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      out(i, j) = full(l1_mode(i, N) + N, l1_mode(j, N) + N);
    }
  }
  return out;
}

Eigen::VectorXcd mean_free_part(const FourierVector& f) {
  const int N = f.N();
  Eigen::VectorXcd v(2 * N);
  for (int i = 0; i < 2 * N; ++i) v[i] = f[l1_mode(i, N)];
  return v;
}

FourierVector from_mean_free(const Eigen::VectorXcd& v, int N, cplx mean) {
  FourierVector f(N);
  for (int i = 0; i < 2 * N; ++i) f[l1_mode(i, N)] = v[i];
  f[0] = mean;
  return f;
}

BlockDecomposition block_decompose(const OperatorParams& p, int N) {
  const BandedOperatorMatrix L = assemble(p, N, OperatorKind::L);
  BlockDecomposition d;
  d.N = N;
  d.l10_image = FourierVector(N);
  d.l10_image[1] = L.entry(1, 0);
  d.l10_image[-1] = L.entry(-1, 0);
  d.l11 = delete_mean(L.dense(), N);
  return d;
}

L11Inverse l11_inverse_direct(const OperatorParams& p, int N) {
  const Eigen::MatrixXcd L11 = block_decompose(p, N).l11;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(L11);
  L11Inverse r;
  r.inverse = lu.inverse();
  r.residual = max_abs(L11 * r.inverse - Eigen::MatrixXcd::Identity(2 * N, 2 * N));
  r.condition = 1.0 / lu.rcond();
  if (!(r.residual <= 1e-8)) {
    std::ostringstream msg;
    msg << "truncated L11 is near singular (residual " << r.residual
        << ", condition ~ " << r.condition << ")";
    throw Error(ErrorCode::solver_breakdown, msg.str());
  }
  return r;
}

HyperplanePair make_hyperplane_pair(const OperatorParams& p, int N) {
  const Z0Result z = compute_z0(p, N);
  HyperplanePair pair{FourierVector::constant(N, 1.0), z.z0, 0.0, z.one_dot_z0};
  pair.alpha = pair.one_dot_z0 / (pair.x1.l2_norm() * pair.x2.l2_norm());
  return pair;
}

FourierVector lift_to_hyperplane(const FourierVector& u, const HyperplanePair& pair) {
  const cplx c = -inner(u, pair.x2) / pair.one_dot_z0;
  FourierVector v = u;
  v[0] += c;
  return v;
}

ComposedStages l11_inverse_composed_stages(const OperatorParams& p, int N,
                                           const FourierVector& g_in) {
  const FourierVector g = g_in.resized(N);
  if (std::abs(g[0]) > 1e-12 * std::max(1.0, g.coeffs().norm())) {
    throw Error(ErrorCode::invalid_argument, "right-hand side must have zero mean");
  }
  const HyperplanePair pair = make_hyperplane_pair(p, N);
  if (std::abs(pair.one_dot_z0) < 1e-12) {
    throw Error(ErrorCode::solver_breakdown, "(1, z0) vanishes; hyperplane pair degenerate");
  }
  ComposedStages st;
  st.antiderivative = FourierVector(N);
  for (int n = -N; n <= N; ++n) {
    if (n != 0) st.antiderivative[n] = g[n] / cplx(0.0, double(n));
  }
  st.lifted = lift_to_hyperplane(st.antiderivative, pair);
  st.shift = st.lifted[0];
  st.solution = minv_fourier(p, st.lifted, N);
  return st;
}

FourierVector l11_inverse_composed(const OperatorParams& p, int N,
                                   const FourierVector& g) {
  return l11_inverse_composed_stages(p, N, g).solution;
}

ResolventSolver::ResolventSolver(const OperatorParams& p, int N, cplx lambda)
    : N_(N), lambda_(lambda), L_(assemble(p, N, OperatorKind::L)) {
  const BlockDecomposition block = block_decompose(p, N);
  l10_ = block.l10_image;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(block.l11, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::eigensolver_failure, "eigensolver failed on L11");
  }
  eigen_distance_ = std::abs(lambda);  // eigenvalue 0 from the constants
  for (const auto& mu : es.eigenvalues()) {
    eigen_distance_ = std::min(eigen_distance_, std::abs(lambda - mu));
  }
  const double scale = L_.dense().cwiseAbs().colwise().sum().maxCoeff();
  if (eigen_distance_ <= 1e-8 * scale) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " lies within " << eigen_distance_
        << " of an eigenvalue of the truncated operator";
    throw Error(ErrorCode::near_eigenvalue, msg.str());
  }
  lu_.compute(block.l11 - lambda * Eigen::MatrixXcd::Identity(2 * N, 2 * N));
}

FourierVector ResolventSolver::operator()(const FourierVector& f_in) const {
  const FourierVector f = f_in.resized(N_);
  const cplx y0 = -f[0] / lambda_;
  Eigen::VectorXcd rhs = mean_free_part(f);
  rhs -= y0 * mean_free_part(l10_);
  return from_mean_free(lu_.solve(rhs), N_, y0);
}

double ResolventSolver::residual(const FourierVector& f, const FourierVector& y) const {
  FourierVector r = apply(L_, y);
  r.coeffs() -= lambda_ * y.coeffs() + f.resized(N_).coeffs();
  return r.coeffs().cwiseAbs().maxCoeff();
}

FourierVector resolvent_apply(const OperatorParams& p, int N, cplx lambda,
                              const FourierVector& f) {
  return ResolventSolver(p, N, lambda)(f);
}

FourierVector resolvent_dense(const OperatorParams& p, int N, cplx lambda,
                              const FourierVector& f) {
  const Eigen::MatrixXcd A = assemble(p, N, OperatorKind::L).dense() -
                             lambda * Eigen::MatrixXcd::Identity(2 * N + 1, 2 * N + 1);
  return FourierVector(N, A.partialPivLu().solve(f.resized(N).coeffs()));
}

std::vector<HsEntry> hs_norm_estimate(const OperatorParams& p,
                                      const std::vector<int>& N_list) {
  for (std::size_t i = 1; i < N_list.size(); ++i) {
    if (N_list[i] <= N_list[i - 1]) {
      throw Error(ErrorCode::invalid_argument, "N list must be strictly ascending");
    }
  }
  std::vector<HsEntry> out;
  for (int N : N_list) out.push_back({N, l11_inverse_direct(p, N).inverse.norm()});
  return out;
}

double hs_row_slope(const OperatorParams& p, int N, int lo, int hi) {
  if (hi < 0) hi = N / 2;
  if (lo < 1 || hi <= lo || hi > N) {
    throw Error(ErrorCode::invalid_argument, "invalid mode range for the row-norm fit");
  }
  const Eigen::MatrixXcd inv = l11_inverse_direct(p, N).inverse;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int i = 0; i < 2 * N; ++i) {
    const int n = std::abs(l1_mode(i, N));
    if (n < lo || n > hi) continue;
    const double x = std::log(double(n)), y = std::log(inv.row(i).norm());
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++count;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace bos
