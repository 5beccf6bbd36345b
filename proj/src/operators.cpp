#include "bos/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "bos/error.hpp"
#include "bos/linalg.hpp"

namespace bos {

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::S: return "S";
    case OperatorKind::M: return "M";
    case OperatorKind::Mstar: return "Mstar";
    case OperatorKind::D: return "D";
    case OperatorKind::C: return "C";
    case OperatorKind::L: return "L";
  }
  return "?";
}

OperatorKind parse_operator_kind(std::string_view name) {
  for (auto k : {OperatorKind::S, OperatorKind::M, OperatorKind::Mstar,
                 OperatorKind::D, OperatorKind::C, OperatorKind::L}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::invalid_argument,
              "unknown operator kind '" + std::string(name) + "'");
}

BandedOperatorMatrix::BandedOperatorMatrix(int N, OperatorKind kind)
    : N_(N),
      kind_(kind),
      lower_(std::size_t(2 * N), 0.0),
      diag_(std::size_t(2 * N + 1), 0.0),
      upper_(std::size_t(2 * N), 0.0) {}

cplx BandedOperatorMatrix::entry(int m, int n) const {
  if (std::abs(m) > N_ || std::abs(n) > N_) return 0.0;
  if (m == n) return diag_[n + N_];
  if (m == n + 1) return lower_[n + N_];
  if (m == n - 1) return upper_[n - 1 + N_];
  return 0.0;
}

void BandedOperatorMatrix::set_entry(int m, int n, cplx value) {
  if (std::abs(m) > N_ || std::abs(n) > N_ || std::abs(m - n) > 1) {
    throw Error(ErrorCode::invalid_argument, "entry outside the tridiagonal band");
  }
  if (m == n) diag_[n + N_] = value;
  else if (m == n + 1) lower_[n + N_] = value;
  else upper_[n - 1 + N_] = value;
}

Eigen::MatrixXcd BandedOperatorMatrix::dense() const {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim(), dim());
  for (int n = -N_; n <= N_; ++n) {
    for (int m = std::max(-N_, n - 1); m <= std::min(N_, n + 1); ++m) {
      A(m + N_, n + N_) = entry(m, n);
    }
  }
  return A;
}

std::vector<cplx> BandedOperatorMatrix::sub_band() const { return lower_; }
std::vector<cplx> BandedOperatorMatrix::diag_band() const { return diag_; }
std::vector<cplx> BandedOperatorMatrix::super_band() const { return upper_; }

namespace {

struct Stencil {
  cplx to_lower;  // coefficient of e^{i(n+1)x}
  cplx diag;
  cplx to_upper;  // coefficient of e^{i(n-1)x}
};

Stencil m_stencil(double a, double b, double n) {
  return {(n * b - a) / 2.0, 1.0, -(n * b + a) / 2.0};
}

// (1 - a cos x) z - b (sin x z)' = (1 - (a+b) cos x) z - b sin x z'
Stencil mstar_stencil(double a, double b, double n) {
  return {-(a + b) / 2.0 - b * n / 2.0, 1.0, -(a + b) / 2.0 + b * n / 2.0};
}

Stencil d_stencil(double a, double b, double) {
  const double off = -(a + 0.5 * b) / 2.0;
  return {off, 1.0, off};
}

// C y = i{(b/2) cos x y - b (sin x y)'}
Stencil c_stencil(double, double b, double n) {
  const cplx I(0.0, 1.0);
  return {-I * b * (2.0 * n + 1.0) / 4.0, 0.0, I * b * (2.0 * n - 1.0) / 4.0};
}

template <class F>
BandedOperatorMatrix from_stencil(int N, OperatorKind kind, F stencil) {
  BandedOperatorMatrix A(N, kind);
  for (int n = -N; n <= N; ++n) {
    const Stencil s = stencil(double(n));
    A.set_entry(n, n, s.diag);
    if (n + 1 <= N) A.set_entry(n + 1, n, s.to_lower);
    if (n - 1 >= -N) A.set_entry(n - 1, n, s.to_upper);
  }
  return A;
}

// Left multiplication by the diagonal S keeps the band: (S M)(m, n) = i m M(m, n).
BandedOperatorMatrix product_s_m(const BandedOperatorMatrix& M) {
  const int N = M.N();
  BandedOperatorMatrix L(N, OperatorKind::L);
  for (int n = -N; n <= N; ++n) {
    for (int m = std::max(-N, n - 1); m <= std::min(N, n + 1); ++m) {
      L.set_entry(m, n, cplx(0.0, double(m)) * M.entry(m, n));
    }
  }
  return L;
}

}  // namespace

BandedOperatorMatrix assemble(const OperatorParams& p, int N, OperatorKind kind) {
  if (N < 2) throw Error(ErrorCode::invalid_argument, "assembly requires N >= 2");
  const double a = p.a(), b = p.b();
  switch (kind) {
    case OperatorKind::S:
      return from_stencil(N, kind, [](double n) {
        return Stencil{0.0, cplx(0.0, n), 0.0};
      });
    case OperatorKind::M:
      return from_stencil(N, kind, [=](double n) { return m_stencil(a, b, n); });
    case OperatorKind::Mstar:
      return from_stencil(N, kind, [=](double n) { return mstar_stencil(a, b, n); });
    case OperatorKind::D:
      return from_stencil(N, kind, [=](double n) { return d_stencil(a, b, n); });
    case OperatorKind::C:
      return from_stencil(N, kind, [=](double n) { return c_stencil(a, b, n); });
    case OperatorKind::L:
      return product_s_m(assemble(p, N, OperatorKind::M));
  }
  throw Error(ErrorCode::invalid_argument, "unknown operator kind");
}

FourierVector apply(const BandedOperatorMatrix& op, const FourierVector& y) {
  if (y.N() != op.N()) {
    throw Error(ErrorCode::dimension_mismatch, "operator and vector truncations differ");
  }
  const int N = op.N();
  FourierVector out(N);
  for (int n = -N; n <= N; ++n) {
    const cplx c = y[n];
    if (c == 0.0) continue;
    out[n] += op.entry(n, n) * c;
    if (n + 1 <= N) out[n + 1] += op.entry(n + 1, n) * c;
    if (n - 1 >= -N) out[n - 1] += op.entry(n - 1, n) * c;
  }
  return out;
}

double adjoint_check(const OperatorParams& p, int N) {
  const Eigen::MatrixXcd M = assemble(p, N, OperatorKind::M).dense();
  const Eigen::MatrixXcd Ms = assemble(p, N, OperatorKind::Mstar).dense();
  return max_abs(Ms - M.adjoint());
}

double hermitian_part_check(const OperatorParams& p, int N) {
  const Eigen::MatrixXcd M = assemble(p, N, OperatorKind::M).dense();
  const Eigen::MatrixXcd D = assemble(p, N, OperatorKind::D).dense();
  return max_abs(D - 0.5 * (M + M.adjoint()));
}

double c_hermitian_defect(const OperatorParams& p, int N) {
  const Eigen::MatrixXcd C = assemble(p, N, OperatorKind::C).dense();
  return max_abs(C - C.adjoint());
}

double d_min_eigenvalue(const OperatorParams& p, int N) {
  const Eigen::MatrixXcd D = assemble(p, N, OperatorKind::D).dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::eigensolver_failure, "Hermitian eigensolver failed on D");
  }
  return es.eigenvalues().minCoeff();
}

FourierVector multiply_by_sin(const FourierVector& y) {
  const int N = y.N();
  FourierVector out(N + 1);
  const cplx half_over_i(0.0, -0.5);  // 1 / (2i)
  for (int n = -N; n <= N; ++n) {
    out[n + 1] += y[n] * half_over_i;
    out[n - 1] -= y[n] * half_over_i;
  }
  return out;
}

FourierVector derivative(const FourierVector& y) {
  FourierVector out(y.N());
  for (int n = -y.N(); n <= y.N(); ++n) out[n] = cplx(0.0, double(n)) * y[n];
  return out;
}

namespace {

constexpr double kH1SlopeLimit = -1.5;
constexpr double kSlopeMargin = 0.1;

// Least-squares slope of log r_n against log n over n in [lo, hi]; magnitudes
// combine the +n and -n modes. Returns nullopt-like NaN when too few points
// rise above the floor.
double tail_slope(const FourierVector& c, int lo, int hi, double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int n = lo; n <= hi; ++n) {
    const double r = std::sqrt(std::norm(c[n]) + std::norm(c[-n]));
    if (r <= floor) continue;
    const double x = std::log(double(n)), y = std::log(r);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++count;
  }
  if (count < 3) return std::numeric_limits<double>::quiet_NaN();
  const double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

}  // namespace

DomainDiagnostic domain_membership(const FourierVector& y, double noise_floor) {
  DomainDiagnostic d;
  const int N = y.N();
  const FourierVector g = multiply_by_sin(derivative(y));
  d.h1_norm_sq = std::pow(y.h1_norm(), 2);
  d.weighted_norm_sq = std::pow(g.h1_norm(), 2);
  d.total_norm_sq = d.h1_norm_sq + d.weighted_norm_sq;

  // Modes |n| = N, N+1 of g are polluted by the truncation edge.
  const int hi = N - 1;
  const int lo = std::max(1, N / 2);
  const double fmax = y.coeffs().cwiseAbs().maxCoeff();
  const double gmax = g.coeffs().cwiseAbs().maxCoeff();
  const double fs = hi >= lo ? tail_slope(y, lo, hi, noise_floor * fmax) : NAN;
  const double gs = hi >= lo ? tail_slope(g, lo, hi, noise_floor * gmax) : NAN;
  d.f_tail_slope = std::isnan(fs) ? 0.0 : fs;
  d.g_tail_slope = std::isnan(gs) ? 0.0 : gs;
  const double limit = kH1SlopeLimit - kSlopeMargin;
  const bool f_ok = std::isnan(fs) || fs < limit;
  const bool g_ok = std::isnan(gs) || gs < limit;
  d.in_domain = std::isfinite(d.total_norm_sq) && f_ok && g_ok;
  return d;
}

}  // namespace bos
