#include "bos/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "bos/error.hpp"
#include "bos/factorization.hpp"
#include "bos/linalg.hpp"
#include "bos/operators.hpp"

namespace bos {

namespace {

bool by_im_then_re(const cplx& x, const cplx& y) {
  if (x.imag() != y.imag()) return x.imag() < y.imag();
  return x.real() < y.real();
}

// Indices of the k smallest |lambda|, returned in (Im, Re) order.
std::vector<int> select_smallest(const Eigen::VectorXcd& ev, int k) {
  std::vector<int> idx(ev.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) {
    const double ai = std::abs(ev[i]), aj = std::abs(ev[j]);
    if (ai != aj) return ai < aj;
    return by_im_then_re(ev[i], ev[j]);
  });
  idx.resize(std::min<std::size_t>(k, idx.size()));
  std::sort(idx.begin(), idx.end(),
            [&](int i, int j) { return by_im_then_re(ev[i], ev[j]); });
  return idx;
}

Eigen::ComplexEigenSolver<Eigen::MatrixXcd> decompose(const OperatorParams& p, int N,
                                                      bool vectors) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(block_decompose(p, N).l11, vectors);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::eigensolver_failure, "complex Schur iteration did not converge");
  }
  return es;
}

double nearest(const Eigen::VectorXcd& ev, cplx z) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& mu : ev) d = std::min(d, std::abs(mu - z));
  return d;
}

}  // namespace

SpectrumReport compute_spectrum(const OperatorParams& p, int N, int k) {
  if (k < 1 || k > N / 2) {
    throw Error(ErrorCode::invalid_argument, "need 1 <= k <= N/2 trusted eigenvalues");
  }
  const auto fine = decompose(p, N, false);
  const auto coarse = decompose(p, N / 2, false);
  const Eigen::VectorXcd& ev = fine.eigenvalues();

  SpectrumReport r;
  r.a = p.a();
  r.b = p.b();
  r.N = N;
  r.all_eigenvalues.assign(ev.begin(), ev.end());
  std::sort(r.all_eigenvalues.begin(), r.all_eigenvalues.end(), by_im_then_re);
  r.symmetry_defect = std::numeric_limits<double>::quiet_NaN();
  std::vector<cplx> trusted;
  for (int i : select_smallest(ev, k)) {
    const cplx lam = ev[i];
    const double shift = nearest(coarse.eigenvalues(), lam);
    const bool ok = shift <= kConvergenceTol * (1.0 + std::abs(lam));
    const double ratio = std::abs(lam.real()) / (1.0 + std::abs(lam));
    r.eigenvalues.push_back(lam);
    r.stability.push_back(shift);
    r.converged.push_back(ok);
    r.max_real_part_ratio = std::max(r.max_real_part_ratio, ratio);
    if (ok) {
      trusted.push_back(lam);
      r.trusted_max_real_part_ratio = std::max(r.trusted_max_real_part_ratio, ratio);
    }
  }
  r.trusted_count = int(trusted.size());
  r.min_trusted_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trusted.size(); ++i) {
    for (std::size_t j = i + 1; j < trusted.size(); ++j) {
      r.min_trusted_gap = std::min(r.min_trusted_gap, std::abs(trusted[i] - trusted[j]));
    }
  }
  if (p.degenerate_drainage()) r.symmetry_defect = eigenfunction_symmetry_check(p, N, k).max_defect;
  return r;
}

double conjugate_pair_defect(const std::vector<cplx>& ev) {
  double worst = 0.0;
  for (const auto& lam : ev) {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& mu : ev) d = std::min(d, std::abs(lam + std::conj(mu)));
    worst = std::max(worst, d);
  }
  return worst;
}

FourierVector gauge_fixed(const FourierVector& v) {
  Eigen::Index imax = 0;
  v.coeffs().cwiseAbs().maxCoeff(&imax);
  const cplx c = v.coeffs()[imax];
  if (c == 0.0) return v;
  FourierVector out = v;
  out.coeffs() *= std::abs(c) / c;
  return out;
}

double reflection_defect(const FourierVector& v) {
  const double norm = v.coeffs().norm();
  if (norm == 0.0) return 0.0;
  // y(-x) - conj(y(x)) has coefficients c_{-m} - conj(c_{-m})
  return 2.0 * v.coeffs().imag().norm() / norm;
}

std::vector<EigenPair> smallest_eigenpairs(const OperatorParams& p, int N, int k) {
  const auto es = decompose(p, N, true);
  std::vector<EigenPair> out;
  for (int i : select_smallest(es.eigenvalues(), k)) {
    Eigen::VectorXcd v = es.eigenvectors().col(i);
    v.normalize();
    out.push_back({es.eigenvalues()[i], gauge_fixed(from_mean_free(v, N))});
  }
  return out;
}

SymmetryCheck eigenfunction_symmetry_check(const OperatorParams& p, int N, int k) {
  if (!p.degenerate_drainage()) {
    throw Error(ErrorCode::invalid_argument, "eigenfunction symmetry is checked at a = 0 only");
  }
  if (k < 1 || k > N / 2) {
    throw Error(ErrorCode::invalid_argument, "need 1 <= k <= N/2 trusted eigenvalues");
  }
  const auto fine = decompose(p, N, false);
  const auto coarse = decompose(p, N / 2, false);
  const auto pairs = smallest_eigenpairs(p, N, k);
  SymmetryCheck r;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const cplx lam = pairs[i].value;
    if (nearest(coarse.eigenvalues(), lam) > kConvergenceTol * (1.0 + std::abs(lam))) {
      ++r.unconverged_excluded;
      continue;
    }
    int close = 0;
    for (const auto& mu : fine.eigenvalues()) {
      if (std::abs(mu - lam) <= kConvergenceTol * (1.0 + std::abs(lam))) ++close;
    }
    if (close > 1) {
      ++r.degenerate_excluded;
      continue;
    }
    r.max_defect = std::max(r.max_defect, reflection_defect(pairs[i].vector));
    ++r.pairs_used;
  }
  return r;
}

Eigen::MatrixXcd j_matrix(int N) {
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1);
  for (int m = -N; m <= N; ++m) J(m + N, -m + N) = (m % 2 == 0) ? 1.0 : -1.0;
  return J;
}

double j_symmetry_defect(const OperatorParams& p, int N) {
  const Eigen::MatrixXcd L = assemble(p, N, OperatorKind::L).dense();
  const Eigen::MatrixXcd J = j_matrix(N);
  const Eigen::MatrixXcd diff = J * L - L.adjoint() * J;
  return max_abs(diff.block(1, 1, 2 * N - 1, 2 * N - 1));
}

double j_symmetry_check(const OperatorParams& p, int N) {
  if (!p.degenerate_drainage()) {
    throw Error(ErrorCode::invalid_argument, "J-self-adjointness holds at a = 0 only");
  }
  return j_symmetry_defect(p, N);
}

}  // namespace bos
