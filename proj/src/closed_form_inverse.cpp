#include "bos/closed_form_inverse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "bos/error.hpp"
#include "bos/linalg.hpp"
#include "bos/operators.hpp"

namespace bos {

void InverseProfile::validate() const {
  if (!(x_cut > 0.0 && x_cut < 0.1)) {
    throw Error(ErrorCode::invalid_argument, "x_cut must lie in (0, 0.1)");
  }
  if (quad_order < 8) throw Error(ErrorCode::invalid_argument, "quad_order must be >= 8");
  if (!(graded_ratio > 0.0 && graded_ratio < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "graded_ratio must lie in (0, 1)");
  }
  if (panels < 4) throw Error(ErrorCode::invalid_argument, "panels must be >= 4");
  if (!(check_tol > 0.0)) throw Error(ErrorCode::invalid_argument, "check_tol must be positive");
}

KernelExponents KernelExponents::of(double a, double b) {
  return {a / b, 1.0 / b, -a / b, 1.0 / b, (1.0 - a) / b - 1.0, -(1.0 + a) / b};
}

void gauss_legendre01(int order, std::vector<double>& x, std::vector<double>& w) {
  x.assign(order, 0.0);
  w.assign(order, 0.0);
  for (int i = 0; i < order; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - z);
    w[i] = 1.0 / ((1.0 - z * z) * dp * dp);
  }
}

namespace {

constexpr double kMaxPanel = 0.25;

// log mu at a point known both as t and as s = pi - t; whichever is small is
// used so that neither endpoint loses relative precision.
struct LogMu {
  double a_over_b, inv_b;
  double operator()(double t, double s, double& sin_t) const {
    double ln_tan_half;
    if (t <= 0.5 * kPi) {
      ln_tan_half = std::log(std::tan(0.5 * t));
      sin_t = std::sin(t);
    } else {
      ln_tan_half = -std::log(std::tan(0.5 * s));
      sin_t = std::sin(s);
    }
    return inv_b * ln_tan_half - a_over_b * std::log(sin_t);
  }
};

}  // namespace

ClosedFormInverse::ClosedFormInverse(const OperatorParams& p, InverseProfile profile)
    : params_(p), profile_(profile) {
  profile_.validate();
  if (!KernelExponents::of(p.a(), p.b()).l2_admissible()) {
    throw Error(ErrorCode::regime_violation, "kernel is not square integrable at 0");
  }
  gauss_legendre01(profile_.quad_order, gauss_x_, gauss_w_);
}

// (1/b) int_0^x u(t) mu(t)/mu(x) / sin t dt for 0 < x < pi.
cplx ClosedFormInverse::integrate(const ComplexFunction& u, double x,
                                  double ratio, int panels) const {
  const double a = params_.a(), b = params_.b();
  const LogMu log_mu{a / b, 1.0 / b};
  const double zero_exp = KernelExponents::of(a, b).zero_exponent;
  double sin_x = 0.0;
  const double d = kPi - x;
  const double lmx = log_mu(x, d, sin_x);

  auto integrand = [&](double t, double s) {
    double sin_t = 0.0;
    const double lm = log_mu(t, s, sin_t);
    return u(t) * (std::exp(lm - lmx) / sin_t);
  };

  cplx acc = 0.0;
  auto gauss_t = [&](double lo, double hi) {
    const int pieces = std::max(1, int(std::ceil((hi - lo) / kMaxPanel)));
    const double h = (hi - lo) / pieces;
    for (int k = 0; k < pieces; ++k) {
      const double p0 = lo + k * h;
      for (std::size_t q = 0; q < gauss_x_.size(); ++q) {
        const double t = p0 + h * gauss_x_[q];
        acc += h * gauss_w_[q] * integrand(t, kPi - t);
      }
    }
  };
  // same, parametrized by the distance s to pi
  auto gauss_s = [&](double s_lo, double s_hi) {
    const int pieces = std::max(1, int(std::ceil((s_hi - s_lo) / kMaxPanel)));
    const double h = (s_hi - s_lo) / pieces;
    for (int k = 0; k < pieces; ++k) {
      const double p0 = s_lo + k * h;
      for (std::size_t q = 0; q < gauss_x_.size(); ++q) {
        const double s = p0 + h * gauss_x_[q];
        acc += h * gauss_w_[q] * integrand(kPi - s, s);
      }
    }
  };

  const double mid = 0.5 * x;
  // [0, mid]: geometric toward the algebraic singularity t^{zero_exp} at 0.
  double right = mid;
  for (int k = 0; k < panels; ++k) {
    const double left = right * ratio;
    gauss_t(left, right);
    right = left;
  }
  // innermost piece: integrand ~ C t^{zero_exp}
  acc += integrand(right, kPi - right) * right / (zero_exp + 1.0);

  // [mid, x]: geometric in s toward the point x, scaled by its distance to pi.
  const double s_end = kPi - mid;
  double s_lo = d;
  while (s_lo < s_end) {
    const double s_hi = std::min(s_end, s_lo / ratio);
    gauss_s(s_lo, s_hi);
    s_lo = s_hi;
  }
  return acc / b;
}

cplx ClosedFormInverse::operator()(const ComplexFunction& u, double x) const {
  const double a = params_.a();
  if (x == 0.0) return u(0.0) / (1.0 - a);
  if (x >= kPi) return u(kPi) / (1.0 + a);
  if (x <= -kPi) return u(-kPi) / (1.0 + a);

  // For x < 0 the substitution t -> -t turns the integral into the x > 0 case
  // applied to u(-t): |t| and the sign of sin t cancel against dt.
  ComplexFunction reflected;
  const ComplexFunction* f = &u;
  if (x < 0.0) {
    reflected = [&u](double t) { return u(-t); };
    f = &reflected;
  }
  const double ax = std::abs(x);
  const cplx y = integrate(*f, ax, profile_.graded_ratio, profile_.panels);
  if (profile_.self_check) {
    const double dist = std::min(ax, kPi - ax);
    if (dist >= profile_.x_cut) {
      const cplx fine = integrate(*f, ax, std::sqrt(profile_.graded_ratio),
                                  2 * profile_.panels);
      const double diff = std::abs(fine - y);
      if (!(diff <= profile_.check_tol * std::max(1.0, std::abs(y)))) {
        std::ostringstream msg;
        msg << "closed-form quadrature did not converge at x = " << x
            << " (grading levels differ by " << diff << ")";
        throw Error(ErrorCode::quadrature_non_convergence, msg.str());
      }
    }
  }
  return y;
}

GridFunction ClosedFormInverse::evaluate(const ComplexFunction& u,
                                         std::span<const double> nodes) const {
  GridFunction out;
  out.nodes.assign(nodes.begin(), nodes.end());
  out.values.assign(nodes.size(), 0.0);
  const auto count = static_cast<std::ptrdiff_t>(nodes.size());
  // exceptions cannot leave a parallel region; collect the first one
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    try {
      out.values[j] = (*this)(u, nodes[j]);
    } catch (...) {
#pragma omp critical(bos_closed_form_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

GridFunction ClosedFormInverse::evaluate_serial(const ComplexFunction& u,
                                                std::span<const double> nodes) const {
  GridFunction out;
  out.nodes.assign(nodes.begin(), nodes.end());
  out.values.reserve(nodes.size());
  for (double x : nodes) out.values.push_back((*this)(u, x));
  return out;
}

GridFunction minv_closed_form(const OperatorParams& p, const ComplexFunction& u,
                              std::span<const double> nodes,
                              const InverseProfile& profile) {
  return ClosedFormInverse(p, profile).evaluate(u, nodes);
}

GridFunction minv_closed_form(const OperatorParams& p, const FourierVector& u,
                              std::span<const double> nodes,
                              const InverseProfile& profile) {
  return minv_closed_form(
      p, [&u](double t) { return evaluate(u, t); }, nodes, profile);
}

FourierVector minv_fourier(const OperatorParams& p, const FourierVector& u, int N) {
  const BandedOperatorMatrix M = assemble(p, N, OperatorKind::M);
  const TridiagonalLU lu(M.sub_band(), M.diag_band(), M.super_band());
  return FourierVector(N, lu.solve(u.resized(N).coeffs()));
}

namespace {

// Taylor coefficients at 0 of the bounded solution, from
// (b k + 1 - a) y_k = u_k - b sum_{j>=3 odd} s_j (k-j+1) y_{k-j+1}
//                         + a sum_{j>=2 even} c_j y_{k-j}
std::vector<cplx> regular_series(double a, double b, const FourierVector& u,
                                 double x0) {
  constexpr int kMaxOrder = 60;
  std::vector<double> fact(kMaxOrder + 2, 1.0);
  for (int k = 1; k < int(fact.size()); ++k) fact[k] = fact[k - 1] * k;
  auto sin_coef = [&](int j) {
    return j % 2 == 1 ? ((j / 2) % 2 == 0 ? 1.0 : -1.0) / fact[j] : 0.0;
  };
  auto cos_coef = [&](int j) {
    return j % 2 == 0 ? ((j / 2) % 2 == 0 ? 1.0 : -1.0) / fact[j] : 0.0;
  };
  std::vector<cplx> y;
  double scale = 0.0;
  for (int k = 0; k <= kMaxOrder; ++k) {
    cplx uk = 0.0;
    for (int n = -u.N(); n <= u.N(); ++n) {
      uk += u[n] * std::pow(cplx(0.0, double(n)), k);
    }
    uk /= fact[k];
    cplx rhs = uk;
    for (int j = 3; j <= k + 1; j += 2) rhs -= b * sin_coef(j) * double(k - j + 1) * y[k - j + 1];
    for (int j = 2; j <= k; j += 2) rhs += a * cos_coef(j) * y[k - j];
    y.push_back(rhs / (b * k + 1.0 - a));
    const double term = std::abs(y.back()) * std::pow(x0, k);
    scale = std::max(scale, term);
    if (k > 4 && term < 1e-18 * scale) break;
  }
  return y;
}

cplx eval_series(const std::vector<cplx>& y, double x) {
  cplx acc = 0.0;
  for (std::size_t k = y.size(); k-- > 0;) acc = acc * x + y[k];
  return acc;
}

}  // namespace

GridFunction minv_ode(const OperatorParams& p, const FourierVector& u,
                      std::span<const double> nodes, double x0, double tol) {
  namespace odeint = boost::numeric::odeint;
  using state = std::array<double, 2>;

  GridFunction out;
  out.nodes.assign(nodes.begin(), nodes.end());
  out.values.assign(nodes.size(), 0.0);
  out.validate();
  if (!(x0 > 0.0 && x0 < 0.5)) throw Error(ErrorCode::invalid_argument, "x0 must lie in (0, 0.5)");

  const double a = p.a(), b = p.b();
  const auto series = regular_series(a, b, u, x0);

  auto rhs = [&](const state& y, state& dy, double x) {
    const cplx yc(y[0], y[1]);
    const cplx d = (evaluate(u, x) - (1.0 - a * std::cos(x)) * yc) / (b * std::sin(x));
    dy[0] = d.real();
    dy[1] = d.imag();
  };

  // indices of nodes to integrate on each side, ordered away from 0
  std::vector<std::size_t> pos, neg;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double x = nodes[j];
    if (std::abs(x) <= x0) {
      out.values[j] = eval_series(series, x);
    } else if (x >= kPi) {
      out.values[j] = evaluate(u, kPi) / (1.0 + a);
    } else if (x <= -kPi) {
      out.values[j] = evaluate(u, -kPi) / (1.0 + a);
    } else if (x > 0) {
      pos.push_back(j);
    } else {
      neg.push_back(j);
    }
  }
  std::reverse(neg.begin(), neg.end());

  auto sweep = [&](const std::vector<std::size_t>& idx, double start) {
    if (idx.empty()) return;
    std::vector<double> times{start};
    for (auto j : idx) times.push_back(nodes[j]);
    const cplx y_start = eval_series(series, start);
    state y{y_start.real(), y_start.imag()};
    std::size_t hit = 0;
    auto observer = [&](const state& s, double) {
      if (hit > 0) out.values[idx[hit - 1]] = cplx(s[0], s[1]);
      ++hit;
    };
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<state>());
    const double dt0 = (start > 0 ? 1.0 : -1.0) * 1e-4;
    odeint::integrate_times(stepper, rhs, y, times.begin(), times.end(), dt0, observer);
  };
  sweep(pos, x0);
  sweep(neg, -x0);
  return out;
}

Y0Profile compute_y0(const OperatorParams& p, std::span<const double> nodes,
                     const InverseProfile& profile) {
  std::vector<double> xs(nodes.begin(), nodes.end());
  for (double x : nodes) xs.push_back(-x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const ClosedFormInverse inverse(p, profile);
  const ComplexFunction one = [](double) { return cplx(1.0); };
  Y0Profile r;
  r.grid = inverse.evaluate(one, xs);
  for (std::size_t i = 0, j = xs.size() - 1; i < xs.size(); ++i, --j) {
    r.evenness_defect = std::max(r.evenness_defect,
                                 std::abs(r.grid.values[i] - r.grid.values[j]));
  }
  // the limits are probed by the quadrature path just inside the singular points
  constexpr double kProbe = 1e-10;
  r.value_at_zero = 0.5 * (inverse(one, kProbe) + inverse(one, -kProbe)).real();
  const cplx right = inverse(one, kPi - kProbe);
  const cplx left = inverse(one, -kPi + kProbe);
  r.value_at_pi = 0.5 * (right + left).real();
  r.periodicity_defect = std::abs(right - left);
  return r;
}

double integrate_y0(const OperatorParams& p, const std::function<double(double)>& weight,
                    const InverseProfile& profile) {
  const ClosedFormInverse inverse(p, profile);
  const ComplexFunction one = [](double) { return cplx(1.0); };
  std::vector<double> gx, gw;
  gauss_legendre01(profile.quad_order, gx, gw);

  std::vector<double> xs, ws;
  auto panel = [&](double lo, double hi) {
    for (std::size_t q = 0; q < gx.size(); ++q) {
      xs.push_back(lo + (hi - lo) * gx[q]);
      ws.push_back((hi - lo) * gw[q]);
    }
  };
  const int uniform = 8;
  for (int k = 0; k < uniform; ++k) panel(0.5 * kPi * k / uniform, 0.5 * kPi * (k + 1) / uniform);
  // y0 - y0(pi) ~ |pi - x|^{(1+a)/b} near pi
  double s_hi = 0.5 * kPi;
  while (s_hi > 1e-15) {
    const double s_lo = s_hi * profile.graded_ratio;
    panel(kPi - s_hi, kPi - s_lo);
    s_hi = s_lo;
  }
  const GridFunction y0 = inverse.evaluate(one, xs);
  double acc = 0.0;
  for (std::size_t q = 0; q < xs.size(); ++q) {
    acc += ws[q] * y0.values[q].real() * (weight(xs[q]) + weight(-xs[q]));
  }
  return acc;
}

Z0Result compute_z0(const OperatorParams& p, int N) {
  const BandedOperatorMatrix Ms = assemble(p, N, OperatorKind::Mstar);
  const TridiagonalLU lu(Ms.sub_band(), Ms.diag_band(), Ms.super_band());
  const FourierVector one = FourierVector::constant(N, 1.0);
  Z0Result r{FourierVector(N, lu.solve(one.coeffs())), 0.0, 0.0};
  r.one_dot_z0 = inner(one, r.z0);
  const FourierVector back = apply(Ms, r.z0);
  r.residual = (back.coeffs() - one.coeffs()).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace bos
