#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "bos/error.hpp"
#include "bos/factorization.hpp"
#include "bos/operators.hpp"

using namespace bos;

namespace {

const std::vector<std::pair<double, double>> kParams = {{0.0, 1.0}, {0.3, 1.0}, {0.2, 1.2}};

FourierVector random_mean_zero(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierVector c(N);
  for (int n = -N; n <= N; ++n) {
    if (n != 0) c[n] = cplx(u(rng), u(rng));
  }
  return c;
}

double l2_dist(const FourierVector& x, const FourierVector& y) {
  return FourierVector(x.N(), x.coeffs() - y.coeffs()).l2_norm();
}

}  // namespace

TEST_CASE("factorization residual against the quadrature assembly") {
  for (auto [a, b, N] : {std::tuple{0.3, 1.0, 64}, {0.0, 1.0, 32}, {0.45, 1.0, 128}, {0.2, 1.2, 32}}) {
    CAPTURE(a);
    CAPTURE(N);
    const auto r = factorization_residual(OperatorParams::validate(a, b), N);
    CHECK(r.interior <= 1e-10);
  }
}

TEST_CASE("block decomposition") {
  const auto p = OperatorParams::validate(0.3, 1.0);
  const int N = 8;
  const auto blk = block_decompose(p, N);
  CHECK(std::abs(blk.l10_image[1] - cplx(0.0, -0.15)) < 1e-15);
  CHECK(std::abs(blk.l10_image[-1] - cplx(0.0, 0.15)) < 1e-15);
  CHECK(blk.l10_image[0] == cplx(0.0));
  CHECK(blk.l10_image[2] == cplx(0.0));
  const auto L = assemble(p, N, OperatorKind::L);
  for (int m = -N; m <= N; ++m) {
    for (int n = -N; n <= N; ++n) {
      if (m == 0 || n == 0) continue;
      CHECK(blk.l11(l1_index(m, N), l1_index(n, N)) == L.entry(m, n));
    }
  }
  for (int i = 0; i < 2 * N; ++i) CHECK(l1_index(l1_mode(i, N), N) == i);
  CHECK(l1_mode(N - 1, N) == -1);
  CHECK(l1_mode(N, N) == 1);
}

TEST_CASE("L11 inverse on sin x at (0, 1)") {
  const auto p = OperatorParams::validate(0.0, 1.0);
  const int N = 32;
  const auto inv = l11_inverse_direct(p, N);
  CHECK(inv.residual <= 1e-8);
  FourierVector g(N);
  g[1] = cplx(0.0, -0.5);
  g[-1] = cplx(0.0, 0.5);  // sin x
  const auto y = from_mean_free(inv.inverse * mean_free_part(g), N);
  CHECK(std::abs(y.mean()) == 0.0);
  const auto Ly = apply(assemble(p, N, OperatorKind::L), y);
  CHECK((Ly.coeffs() - g.coeffs()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("L11 inverse identity and domain diagnostic") {
  std::mt19937_64 rng(21);
  const auto p = OperatorParams::validate(0.3, 1.0);
  const int N = 64;
  const auto inv = l11_inverse_direct(p, N);
  const auto L11 = block_decompose(p, N).l11;
  for (int s = 0; s < 10; ++s) {
    const Eigen::VectorXcd v = mean_free_part(random_mean_zero(rng, N));
    CHECK((inv.inverse * (L11 * v) - v).cwiseAbs().maxCoeff() < 1e-8);
  }
  for (int n : {-1, 1}) {
    const Eigen::VectorXcd col = inv.inverse.col(l1_index(n, N));
    const auto d = domain_membership(from_mean_free(col, N));
    CHECK(std::isfinite(d.h1_norm_sq));
    CHECK(std::isfinite(d.weighted_norm_sq));
  }
}

TEST_CASE("composed and direct L11 inverses agree") {
  std::mt19937_64 rng(22);
  for (auto [a, b] : kParams) {
    const auto p = OperatorParams::validate(a, b);
    for (int N : {32, 64}) {
      const auto inv = l11_inverse_direct(p, N);
      const auto pair = make_hyperplane_pair(p, N);
      for (int s = 0; s < 20; ++s) {
        const auto g = random_mean_zero(rng, N);
        const auto st = l11_inverse_composed_stages(p, N, g);
        const auto ref = from_mean_free(inv.inverse * mean_free_part(g), N);
        CHECK(l2_dist(st.solution, ref) <= 1e-7);
        CHECK(std::abs(inner(st.lifted, pair.x2)) <= 1e-10);
        CHECK(std::abs(st.solution.mean()) <= 1e-8);
        // stage (i) is S^{-1}: derivative brings back g
        CHECK((derivative(st.antiderivative).coeffs() - g.coeffs()).cwiseAbs().maxCoeff() < 1e-14);
      }
    }
  }
}

TEST_CASE("composed inverse of sin x at (0, 1)") {
  const auto p = OperatorParams::validate(0.0, 1.0);
  const int N = 32;
  FourierVector g(N);
  g[1] = cplx(0.0, -0.5);
  g[-1] = cplx(0.0, 0.5);
  const auto y = l11_inverse_composed(p, N, g);
  const auto ref = from_mean_free(l11_inverse_direct(p, N).inverse * mean_free_part(g), N);
  CHECK(l2_dist(y, ref) <= 1e-7);
}

TEST_CASE("hyperplane lift is a bijection on mean-zero data") {
  std::mt19937_64 rng(23);
  const auto p = OperatorParams::validate(0.3, 1.0);
  const auto pair = make_hyperplane_pair(p, 32);
  CHECK(std::abs(pair.alpha) > 0.0);
  CHECK(std::abs(pair.x1[0] - 1.0) == 0.0);
  for (int s = 0; s < 5; ++s) {
    const auto w = random_mean_zero(rng, 32);
    auto v = lift_to_hyperplane(w, pair);
    CHECK(std::abs(inner(v, pair.x2)) <= 1e-12 * v.l2_norm());
    v[0] = 0.0;
    CHECK((v.coeffs() - w.coeffs()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("composed inverse rejects data with a mean") {
  const auto p = OperatorParams::validate(0.3, 1.0);
  CHECK_THROWS_AS(l11_inverse_composed(p, 16, FourierVector::constant(16, 1.0)), Error);
}

TEST_CASE("resolvent on constants") {
  const auto p0 = OperatorParams::validate(0.0, 1.0);
  const auto y0 = resolvent_apply(p0, 16, 1.0, FourierVector::constant(16, 1.0));
  CHECK(std::abs(y0[0] + 1.0) < 1e-14);
  CHECK(y0.coeffs().cwiseAbs().sum() == doctest::Approx(1.0));

  const auto p = OperatorParams::validate(0.3, 1.0);
  const auto f = FourierVector::constant(16, 1.0);
  const auto y = resolvent_apply(p, 16, 1.0, f);
  CHECK(std::abs(y[1]) > 1e-3);
  CHECK(std::abs(y[-1]) > 1e-3);
  CHECK(l2_dist(y, resolvent_dense(p, 16, 1.0, f)) <= 1e-8);
}

TEST_CASE("block resolvent equals the dense solve") {
  std::mt19937_64 rng(24);
  for (auto [a, b] : kParams) {
    const auto p = OperatorParams::validate(a, b);
    for (cplx lam : {cplx(1.0), cplx(2.0, 1.0), cplx(-1.0, 3.0)}) {
      const ResolventSolver solve(p, 64, lam);
      auto f = random_mean_zero(rng, 64);
      f[0] = cplx(0.3, 0.7);
      const auto y = solve(f);
      CHECK(l2_dist(y, resolvent_dense(p, 64, lam, f)) <= 1e-8);
      CHECK(solve.residual(f, y) <= 1e-8);
    }
  }
}

TEST_CASE("first resolvent identity") {
  std::mt19937_64 rng(25);
  const auto p = OperatorParams::validate(0.3, 1.0);
  const cplx lam(1.0, 1.0), mu(2.0, -1.0);
  const ResolventSolver rl(p, 32, lam), rm(p, 32, mu);
  for (int s = 0; s < 5; ++s) {
    auto f = random_mean_zero(rng, 32);
    f[0] = 1.0;
    const Eigen::VectorXcd lhs = rl(f).coeffs() - rm(f).coeffs();
    const Eigen::VectorXcd rhs = (lam - mu) * rl(rm(f)).coeffs();
    CHECK(FourierVector(32, lhs - rhs).l2_norm() <= 1e-7);
  }
}

TEST_CASE("resolvent refuses eigenvalues") {
  const auto p = OperatorParams::validate(0.3, 1.0);
  try {
    ResolventSolver(p, 16, 0.0);
    FAIL("expected refusal at lambda = 0");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::near_eigenvalue);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(block_decompose(p, 16).l11);
  const cplx ev = es.eigenvalues()[3];
  CHECK_THROWS_AS(ResolventSolver(p, 16, ev + 1e-12), Error);
  CHECK_NOTHROW(ResolventSolver(p, 16, ev + 0.5));
}

TEST_CASE("zero-row structure: full solve restricted to n != 0 matches L11") {
  std::mt19937_64 rng(26);
  const auto p = OperatorParams::validate(0.2, 1.2);
  const int N = 32;
  const cplx lam(0.5, 2.0);
  const auto f = random_mean_zero(rng, N);
  const auto full = resolvent_dense(p, N, lam, f);
  const Eigen::MatrixXcd A = block_decompose(p, N).l11 - lam * Eigen::MatrixXcd::Identity(2 * N, 2 * N);
  const Eigen::VectorXcd y1 = A.partialPivLu().solve(mean_free_part(f));
  CHECK((mean_free_part(full) - y1).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(std::abs(full[0]) <= 1e-14);
}

TEST_CASE("Hilbert-Schmidt trend") {
  for (auto [a, b] : {std::pair{0.0, 1.0}, {0.3, 1.0}}) {
    const auto seq = hs_norm_estimate(OperatorParams::validate(a, b), {16, 32, 64, 128});
    REQUIRE(seq.size() == 4);
    double prev = INFINITY;
    for (std::size_t i = 1; i < seq.size(); ++i) {
      const double d = std::abs(seq[i].frobenius - seq[i - 1].frobenius);
      CHECK(d < prev);
      prev = d;
    }
    CHECK(hs_row_slope(OperatorParams::validate(a, b), 128) <= -0.9);
  }
  CHECK_THROWS_AS(hs_norm_estimate(OperatorParams::validate(0.0, 1.0), {32, 16}), Error);
}
