#include "bos/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "bos/error.hpp"
#include "bos/factorization.hpp"
#include "bos/operators.hpp"
#include "bos/spectrum.hpp"

namespace bos {

std::string to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "expm"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "rk4") return Scheme::rk4;
  if (name == "expm" || name == "exact-expm") return Scheme::expm;
  throw Error(ErrorCode::invalid_argument, "unknown scheme '" + name + "'");
}

namespace {

bool finite(const FourierVector& y) { return y.coeffs().allFinite(); }

FourierVector rk4_step(const BandedOperatorMatrix& L, const FourierVector& y, double dt) {
  auto rhs = [&](const FourierVector& v) {
    FourierVector r = apply(L, v);
    r.coeffs() = -r.coeffs();
    return r;
  };
  const FourierVector k1 = rhs(y);
  const FourierVector k2 = rhs(FourierVector(y.N(), y.coeffs() + 0.5 * dt * k1.coeffs()));
  const FourierVector k3 = rhs(FourierVector(y.N(), y.coeffs() + 0.5 * dt * k2.coeffs()));
  const FourierVector k4 = rhs(FourierVector(y.N(), y.coeffs() + dt * k3.coeffs()));
  return FourierVector(y.N(), y.coeffs() + (dt / 6.0) * (k1.coeffs() + 2.0 * k2.coeffs() +
                                                          2.0 * k3.coeffs() + k4.coeffs()));
}

}  // namespace

EvolutionTrace evolve(const OperatorParams& p, int N, const FourierVector& y_init, double dt,
                      double t_max, Scheme scheme, const EvolveOptions& options) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::invalid_argument, "dt must be positive");
  }
  if (!(t_max >= 0.0) || !(options.checkpoint > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "t_max must be >= 0 and checkpoint > 0");
  }
  if (y_init.N() != N) {
    throw Error(ErrorCode::dimension_mismatch, "initial data truncation differs from N");
  }
  const auto L = assemble(p, N, OperatorKind::L);
  const long total = std::max(1L, std::lround(t_max / dt));
  const long every = std::max(1L, std::lround(options.checkpoint / dt));
  const double h = t_max > 0.0 ? t_max / double(total) : 0.0;

  const Eigen::MatrixXcd dense = scheme == Scheme::expm ? L.dense() : Eigen::MatrixXcd();
  auto make_propagator = [&](double tau) {
    Eigen::MatrixXcd E = (-tau * dense).exp();
    // row 0 of L_N vanishes, so the mean row of exp(-tau L_N) is exactly e_0
    E.row(N).setZero();
    E(N, N) = 1.0;
    return E;
  };
  Eigen::MatrixXcd propagator;
  if (scheme == Scheme::expm) propagator = make_propagator(double(every) * h);

  EvolutionTrace tr;
  auto record = [&](double t, const FourierVector& y) {
    tr.times.push_back(t);
    tr.l2_norms.push_back(y.l2_norm());
    tr.h1_norms.push_back(y.h1_norm());
    tr.means.push_back(y.mean());
    if (options.keep_snapshots) tr.snapshots.push_back(y);
    tr.last_finite_time = t;
  };

  FourierVector y = y_init;
  record(0.0, y);
  for (long step = 0; step < total && t_max > 0.0;) {
    const long n = std::min(every, total - step);
    if (scheme == Scheme::expm) {
      if (n == every) {
        y.coeffs() = propagator * y.coeffs();
      } else {
        y.coeffs() = make_propagator(double(n) * h) * y.coeffs();
      }
    } else {
      // step-halving estimate on the first step of each checkpoint interval
      const FourierVector full = rk4_step(L, y, h);
      const FourierVector half = rk4_step(L, rk4_step(L, y, 0.5 * h), 0.5 * h);
      const double scale = std::max(half.coeffs().norm(), std::numeric_limits<double>::min());
      const double est = (full.coeffs() - half.coeffs()).norm() / scale;
      if (std::isfinite(est)) tr.step_halving_error = std::max(tr.step_halving_error, est);
      y = full;
      for (long i = 1; i < n; ++i) y = rk4_step(L, y, h);
    }
    step += n;
    const double l2 = finite(y) ? y.l2_norm() : std::numeric_limits<double>::infinity();
    if (!std::isfinite(l2) || !std::isfinite(y.h1_norm())) {
      tr.blowup = true;
      tr.blowup_time = double(step) * h;
      break;
    }
    record(double(step) * h, y);
  }
  const double l0 = tr.l2_norms.front();
  double peak = l0;
  for (double v : tr.l2_norms) peak = std::max(peak, v);
  tr.growth_factor = l0 > 0.0 ? peak / l0 : 1.0;
  if (tr.blowup) tr.growth_factor = std::numeric_limits<double>::infinity();
  return tr;
}

ScaledMatrix scaled_expm(const Eigen::MatrixXcd& A, double t) {
  const Eigen::Index n = A.rows();
  ScaledMatrix out{Eigen::MatrixXcd::Identity(n, n), 0.0};
  if (t == 0.0) return out;
  const double norm1 = (t * A).cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm1 > 0.5) s = int(std::ceil(std::log2(norm1 / 0.5)));
  Eigen::MatrixXcd E = (A * (t / std::ldexp(1.0, s))).exp();
  double log_scale = 0.0;
  for (int i = 0; i < s; ++i) {
    const double m = E.cwiseAbs().maxCoeff();
    if (m > 0.0) {
      E /= m;
      log_scale += std::log(m);
    }
    E = (E * E).eval();
    log_scale *= 2.0;
  }
  out.value = E;
  out.log_scale = log_scale;
  return out;
}

double log_norm2(const ScaledMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.value);
  return std::log(svd.singularValues()(0)) + m.log_scale;
}

std::vector<GrowthRow> growth_envelope(const OperatorParams& p, const std::vector<int>& N_list,
                                       const std::vector<double>& t_grid) {
  if (!std::is_sorted(N_list.begin(), N_list.end()) ||
      std::adjacent_find(N_list.begin(), N_list.end()) != N_list.end()) {
    throw Error(ErrorCode::invalid_argument, "N list must be strictly ascending");
  }
  std::vector<GrowthRow> rows;
  for (int N : N_list) {
    const Eigen::MatrixXcd L11 = block_decompose(p, N).l11;
    for (double t : t_grid) {
      GrowthRow r;
      r.N = N;
      r.t = t;
      if (t != 0.0) {
        r.log10_norm = log_norm2(scaled_expm(-L11, t)) / std::log(10.0);
        r.norm = std::pow(10.0, r.log10_norm);
      }
      rows.push_back(r);
    }
  }
  return rows;
}

std::vector<std::pair<int, double>> envelope_maxima(const std::vector<GrowthRow>& rows) {
  std::vector<std::pair<int, double>> out;
  for (const auto& r : rows) {
    if (out.empty() || out.back().first != r.N) {
      out.emplace_back(r.N, r.log10_norm);
    } else {
      out.back().second = std::max(out.back().second, r.log10_norm);
    }
  }
  return out;
}

FourierVector initial_preset(const std::string& name, const OperatorParams& p, int N,
                             std::uint64_t seed) {
  FourierVector y(N);
  if (name == "bump") {
    // periodic Gaussian of width ~0.35 centred at 0, coefficients truncated
    for (int n = -N; n <= N; ++n) y[n] = std::exp(-0.0625 * n * n) / kTwoPi;
    return y;
  }
  if (name == "constant") return FourierVector::constant(N, 1.0);
  if (name == "random") {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int n = -N; n <= N; ++n) {
      const double re = u(rng), im = u(rng);
      y[n] = cplx(re, im) / (1.0 + double(n) * n);
    }
    return y;
  }
  if (name.rfind("mode:", 0) == 0) {
    int k = 0;
    try {
      k = std::stoi(name.substr(5));
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bad mode preset '" + name + "'");
    }
    if (k < 1 || k > 2 * N) {
      throw Error(ErrorCode::invalid_argument, "mode index out of range in '" + name + "'");
    }
    auto pairs = smallest_eigenpairs(p, N, k);
    auto it = std::max_element(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
      if (std::abs(x.value) != std::abs(y.value)) return std::abs(x.value) < std::abs(y.value);
      return x.value.imag() < y.value.imag();
    });
    return it->vector;
  }
  throw Error(ErrorCode::invalid_argument, "unknown initial preset '" + name + "'");
}

}  // namespace bos
