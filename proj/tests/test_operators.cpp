#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "bos/closed_form_inverse.hpp"
#include "bos/error.hpp"
#include "bos/operators.hpp"

using namespace bos;

namespace {

const cplx I(0.0, 1.0);

// Projection of l[e^{inx}] onto e^{imx}, with l evaluated pointwise from
// a sin x y + (1 + (b - a) cos x) y' + b sin x y'' and the trapezoidal rule.
cplx l_entry_by_quadrature(double a, double b, int m, int n, int K) {
  cplx s = 0.0;
  for (int j = 0; j < K; ++j) {
    const double x = -kPi + kTwoPi * j / K;
    const cplx y = std::polar(1.0, n * x);
    const cplx dy = I * double(n) * y;
    const cplx d2y = -double(n) * n * y;
    const cplx ly = a * std::sin(x) * y + (1.0 + (b - a) * std::cos(x)) * dy + b * std::sin(x) * d2y;
    s += ly * std::polar(1.0, -m * x);
  }
  return s / double(K);
}

// Same for M y = (1 - a cos x) y + b sin x y'.
cplx m_entry_by_quadrature(double a, double b, int m, int n, int K) {
  cplx s = 0.0;
  for (int j = 0; j < K; ++j) {
    const double x = -kPi + kTwoPi * j / K;
    const cplx y = std::polar(1.0, n * x);
    const cplx my = (1.0 - a * std::cos(x)) * y + b * std::sin(x) * I * double(n) * y;
    s += my * std::polar(1.0, -m * x);
  }
  return s / double(K);
}

double max_abs(const Eigen::MatrixXcd& A) { return A.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("S is diagonal i n") {
  const auto p = OperatorParams::validate(0.3, 1.0);
  const auto S = assemble(p, 4, OperatorKind::S);
  CHECK(S.entry(3, 3) == cplx(0.0, 3.0));
  CHECK(S.entry(-2, -2) == cplx(0.0, -2.0));
  CHECK(S.entry(3, 2) == cplx(0.0));
  const auto z = apply(S, FourierVector::constant(4, 2.5));
  CHECK(z.coeffs().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("M stencil at (0.3, 1.0), n = 2, and the quadrature oracle") {
  const auto p = OperatorParams::validate(0.3, 1.0);
  const auto M = assemble(p, 8, OperatorKind::M);
  CHECK(M.entry(3, 2).real() == doctest::Approx(0.85));
  CHECK(M.entry(1, 2).real() == doctest::Approx(-1.15));
  CHECK(M.entry(2, 2) == cplx(1.0));
  for (int n = -8; n <= 8; ++n) {
    for (int m = -8; m <= 8; ++m) {
      CHECK(std::abs(M.entry(m, n) - m_entry_by_quadrature(0.3, 1.0, m, n, 128)) < 1e-13);
    }
  }
}

TEST_CASE("M applied to 1 gives 1 - a cos x") {
  const auto p = OperatorParams::validate(0.3, 1.0);
  const auto y = apply(assemble(p, 5, OperatorKind::M), FourierVector::constant(5, 1.0));
  CHECK(std::abs(y[0] - 1.0) < 1e-15);
  CHECK(std::abs(y[1] + 0.15) < 1e-15);
  CHECK(std::abs(y[-1] + 0.15) < 1e-15);
  CHECK(std::abs(y[2]) == 0.0);
}

TEST_CASE("L column 0 encodes a sin x") {
  const auto p = OperatorParams::validate(0.3, 1.0);
  const auto L = assemble(p, 6, OperatorKind::L);
  // a sin x = (a / 2i)(e^{ix} - e^{-ix})
  CHECK(std::abs(L.entry(1, 0) - cplx(0.0, -0.15)) < 1e-15);
  CHECK(std::abs(L.entry(-1, 0) - cplx(0.0, 0.15)) < 1e-15);
  CHECK(L.entry(0, 0) == cplx(0.0));
}

TEST_CASE("row 0 of L vanishes") {
  for (auto [a, b] : {std::pair{0.0, 1.0}, {0.3, 1.0}, {0.45, 1.0}, {0.2, 1.2}}) {
    const auto L = assemble(OperatorParams::validate(a, b), 16, OperatorKind::L).dense();
    CHECK(L.row(16).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("L agrees with pointwise quadrature of the operator") {
  for (auto [a, b] : {std::pair{0.0, 1.0}, {0.3, 1.0}, {0.45, 1.0}}) {
    const int N = 8;
    const auto L = assemble(OperatorParams::validate(a, b), N, OperatorKind::L);
    for (int n = -N + 1; n <= N - 1; ++n) {
      for (int m = -N; m <= N; ++m) {
        CHECK(std::abs(L.entry(m, n) - l_entry_by_quadrature(a, b, m, n, 256)) < 1e-11);
      }
    }
  }
}

TEST_CASE("L applied to cos x matches the oracle") {
  const double a = 0.3, b = 1.0;
  const auto p = OperatorParams::validate(a, b);
  FourierVector c(10);
  c[1] = c[-1] = 0.5;
  const auto y = apply(assemble(p, 10, OperatorKind::L), c);
  for (int m = -10; m <= 10; ++m) {
    const cplx ref = 0.5 * (l_entry_by_quadrature(a, b, m, 1, 256) + l_entry_by_quadrature(a, b, m, -1, 256));
    CHECK(std::abs(y[m] - ref) < 1e-10);
  }
}

TEST_CASE("band identity L = S M") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double b = 0.05 + 1.9 * u(rng);
    const double a = 0.999 * (2.0 - b) / 2.0 * u(rng);
    const auto p = OperatorParams::validate(a, b);
    const int N = 20;
    const Eigen::MatrixXcd L = assemble(p, N, OperatorKind::L).dense();
    const Eigen::MatrixXcd SM = assemble(p, N, OperatorKind::S).dense() * assemble(p, N, OperatorKind::M).dense();
    CHECK(max_abs((L - SM).middleCols(1, 2 * N - 1)) <= 1e-13);
  }
}

TEST_CASE("adjoint, Hermitian part and C") {
  for (auto [a, b, N] : {std::tuple{0.3, 1.0, 32}, {0.0, 1.0, 16}, {0.45, 1.0, 512}, {0.2, 1.2, 64}}) {
    const auto p = OperatorParams::validate(a, b);
    const Eigen::MatrixXcd M = assemble(p, N, OperatorKind::M).dense();
    const Eigen::MatrixXcd Ms = assemble(p, N, OperatorKind::Mstar).dense();
    const Eigen::MatrixXcd D = assemble(p, N, OperatorKind::D).dense();
    const Eigen::MatrixXcd C = assemble(p, N, OperatorKind::C).dense();
    CHECK(max_abs(Ms - M.adjoint()) <= 1e-13);
    CHECK(adjoint_check(p, N) <= 1e-13);
    CHECK(max_abs(D - 0.5 * (M + M.adjoint())) <= 1e-13);
    CHECK(hermitian_part_check(p, N) <= 1e-13);
    CHECK(max_abs(C - C.adjoint()) <= 1e-13);
    CHECK(c_hermitian_defect(p, N) <= 1e-13);
    CHECK(max_abs(M - (D + I * C)) <= 1e-13);
    if (N <= 64) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D);
      CHECK(es.eigenvalues().minCoeff() >= p.hermitian_part_floor() - 1e-10);
    }
    CHECK(d_min_eigenvalue(p, std::min(N, 64)) >= p.hermitian_part_floor() - 1e-10);
  }
}

TEST_CASE("D positivity approaches the symbol minimum") {
  const auto p = OperatorParams::validate(0.3, 1.0);
  const double lo = d_min_eigenvalue(p, 64);
  CHECK(lo >= 0.2 - 1e-10);
  CHECK(lo <= 0.2 + 1e-2);
}

TEST_CASE("banded apply equals the dense product") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto p = OperatorParams::validate(0.2, 1.2);
  const int N = 12;
  FourierVector y(N);
  for (int n = -N; n <= N; ++n) y[n] = cplx(u(rng), u(rng));
  for (auto kind : {OperatorKind::S, OperatorKind::M, OperatorKind::Mstar, OperatorKind::D,
                    OperatorKind::C, OperatorKind::L}) {
    const auto op = assemble(p, N, kind);
    const Eigen::VectorXcd ref = op.dense() * y.coeffs();
    CHECK((apply(op, y).coeffs() - ref).cwiseAbs().maxCoeff() < 1e-13);
    for (int m = -N; m <= N; ++m) {
      for (int n = -N; n <= N; ++n) {
        if (std::abs(m - n) > 1) CHECK(op.entry(m, n) == cplx(0.0));
      }
    }
  }
}

TEST_CASE("assemble and apply reject bad input") {
  const auto p = OperatorParams::validate(0.3, 1.0);
  CHECK_THROWS_AS(assemble(p, 1, OperatorKind::M), Error);
  CHECK_THROWS_AS(apply(assemble(p, 4, OperatorKind::M), FourierVector(5)), Error);
  CHECK_THROWS_AS(parse_operator_kind("Q"), Error);
  CHECK(parse_operator_kind("Mstar") == OperatorKind::Mstar);
  CHECK(to_string(OperatorKind::C) == "C");
}

TEST_CASE("multiply_by_sin and derivative") {
  FourierVector c(3);
  c[0] = 1.0;
  const auto s = multiply_by_sin(c);
  CHECK(s.N() == 4);
  CHECK(std::abs(s[1] - cplx(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(s[-1] - cplx(0.0, 0.5)) < 1e-15);
  FourierVector e(3);
  e[2] = 1.0;
  CHECK(derivative(e)[2] == cplx(0.0, 2.0));
}

TEST_CASE("domain membership") {
  FourierVector e(16);
  e[1] = 1.0;
  const auto d1 = domain_membership(e);
  CHECK(d1.in_domain);
  CHECK(d1.h1_norm_sq == doctest::Approx(kTwoPi * 2.0));
  CHECK(d1.total_norm_sq == doctest::Approx(d1.h1_norm_sq + d1.weighted_norm_sq));

  FourierVector slow(256);
  for (int n = -256; n <= 256; ++n) slow[n] = 1.0 / (1.0 + std::abs(n));
  const auto d2 = domain_membership(slow);
  CHECK_FALSE(d2.in_domain);
  CHECK(d2.f_tail_slope > -1.6);

  const auto p = OperatorParams::validate(0.3, 1.0);
  const auto y0 = minv_closed_form(p, [](double) { return cplx(1.0); }, uniform_grid(2048));
  const auto coeffs = analyze(y0, 256);
  const auto d3 = domain_membership(coeffs);
  CHECK(d3.in_domain);
  CHECK(d3.f_tail_slope < -1.6);
  CHECK(d3.g_tail_slope < -1.6);
}
