#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bos/error.hpp"
#include "bos/fourier.hpp"
#include "bos/kernels.hpp"

using namespace bos;

namespace {

FourierVector random_vector(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierVector c(N);
  for (int n = -N; n <= N; ++n) c[n] = cplx(u(rng), u(rng));
  return c;
}

// direct sum, independent of the Horner kernel
cplx direct_sum(const FourierVector& c, double x) {
  cplx s = 0.0;
  for (int n = -c.N(); n <= c.N(); ++n) s += c[n] * std::polar(1.0, n * x);
  return s;
}

}  // namespace

TEST_CASE("uniform grid starts at -pi and stays below pi") {
  const auto g = uniform_grid(8);
  REQUIRE(g.size() == 8);
  CHECK(g.front() == doctest::Approx(-kPi));
  CHECK(g[4] == doctest::Approx(0.0));
  CHECK(g.back() < kPi);
}

TEST_CASE("synthesize matches the direct sum") {
  std::mt19937_64 rng(7);
  const auto c = random_vector(rng, 12);
  const std::vector<double> nodes = {-3.0, -1.0, 0.0, 0.5, 2.9, kPi};
  const auto f = synthesize(c, nodes);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    CHECK(std::abs(f.values[j] - direct_sum(c, nodes[j])) < 1e-12);
    CHECK(std::abs(evaluate(c, nodes[j]) - direct_sum(c, nodes[j])) < 1e-12);
  }
}

TEST_CASE("analyze inverts synthesize on a sufficient grid") {
  std::mt19937_64 rng(11);
  for (int N : {1, 5, 16}) {
    const auto c = random_vector(rng, N);
    for (int K : {2 * N + 1, 2 * N + 2, 4 * N + 3}) {
      const auto f = synthesize(c, uniform_grid(K));
      const auto back = analyze(f, N);
      CHECK((back.coeffs() - c.coeffs()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("too few samples is an aliasing error") {
  const auto f = synthesize(FourierVector::constant(4, 1.0), uniform_grid(8));
  CHECK_THROWS_AS(analyze(f, 4), Error);
  try {
    analyze(f, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::aliasing);
  }
}

TEST_CASE("analyze_checked flags content above the truncation") {
  FourierVector c(6);
  c[0] = 1.0;
  c[5] = 0.25;
  const auto f = synthesize(c, uniform_grid(32));
  CHECK_FALSE(analyze_checked(f, 6).aliased);
  const auto rep = analyze_checked(f, 3);
  CHECK(rep.aliased);
  CHECK(rep.alias_residual > 0.1);
}

TEST_CASE("analyze requires a uniform periodic grid") {
  GridFunction f;
  f.nodes = {-3.0, -1.0, 0.1, 2.0, 3.0};
  f.values.assign(5, 1.0);
  CHECK_THROWS_AS(analyze(f, 1), Error);
}

TEST_CASE("grid validation") {
  GridFunction f;
  f.nodes = {0.0, 0.0};
  f.values = {1.0, 1.0};
  CHECK_THROWS_AS(f.validate(), Error);
  f.nodes = {0.0, 4.0};
  CHECK_THROWS_AS(f.validate(), Error);
  f.nodes = {0.0};
  CHECK_THROWS_AS(f.validate(), Error);
}

TEST_CASE("Parseval: sampled L2 norm equals the coefficient norm") {
  std::mt19937_64 rng(3);
  const auto c = random_vector(rng, 10);
  const auto f = synthesize(c, uniform_grid(64));
  CHECK(grid_l2_norm(f) == doctest::Approx(c.l2_norm()).epsilon(1e-12));
  CHECK(c.l2_norm() == doctest::Approx(std::sqrt(kTwoPi) * c.coeffs().norm()).epsilon(1e-14));
}

TEST_CASE("inner product convention") {
  FourierVector e1(2), e2(2);
  e1[1] = 1.0;
  e2[1] = cplx(0.0, 1.0);
  CHECK(std::abs(inner(e1, e1) - kTwoPi) < 1e-14);
  // <f, i f> = -i <f, f>
  CHECK(std::abs(inner(e1, e2) - cplx(0.0, -kTwoPi)) < 1e-14);
  CHECK(std::abs(inner(FourierVector::constant(3, 1.0), FourierVector::constant(3, 1.0)) - kTwoPi) < 1e-14);
}

TEST_CASE("h1 norm weights by 1 + n^2") {
  FourierVector c(3);
  c[2] = 1.0;
  CHECK(c.h1_norm() == doctest::Approx(std::sqrt(kTwoPi * 5.0)));
}

TEST_CASE("resized pads and clips symmetrically") {
  std::mt19937_64 rng(5);
  const auto c = random_vector(rng, 3);
  const auto wide = c.resized(6);
  CHECK(wide.N() == 6);
  CHECK(wide[3] == c[3]);
  CHECK(wide[6] == cplx(0.0));
  const auto narrow = wide.resized(2);
  CHECK(narrow[-2] == c[-2]);
  CHECK(narrow.size() == 5);
}

TEST_CASE("dimension mismatch on construction") {
  CHECK_THROWS_AS(FourierVector(3, Eigen::VectorXcd::Zero(5)), Error);
}

TEST_CASE("synthesize_uniform folds modes exactly on the grid") {
  std::mt19937_64 rng(9);
  const auto c = random_vector(rng, 40);
  const int K = 32;
  const auto folded = synthesize_uniform(c, K);
  const auto grid = uniform_grid(K);
  for (int j = 0; j < K; ++j) CHECK(std::abs(folded.values[j] - direct_sum(c, grid[j])) < 1e-11);
}

TEST_CASE("grid CSV round trip is exact") {
  GridFunction f;
  f.nodes = {-1.0 / 3.0, 0.1, 2.0};
  f.values = {cplx(1.0 / 7.0, -2.0), cplx(0.0, 1e-300), cplx(3.0, 0.0)};
  std::stringstream ss;
  write_grid_csv(ss, f);
  CHECK(ss.str().rfind("x,re,im\n", 0) == 0);
  const auto g = read_grid_csv(ss);
  REQUIRE(g.size() == 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(g.nodes[j] == f.nodes[j]);
    CHECK(g.values[j] == f.values[j]);
  }
}

TEST_CASE("malformed CSV is rejected") {
  std::stringstream ss("x,re,im\n0.1,abc,0\n");
  CHECK_THROWS_AS(read_grid_csv(ss), Error);
  CHECK_THROWS_AS(read_grid_csv(std::string("/nonexistent/file.csv")), Error);
}

TEST_CASE("serial and OpenMP kernels agree") {
  std::mt19937_64 rng(13);
  const int N = 50;
  const auto c = random_vector(rng, N);
  const auto nodes = uniform_grid(257);
  std::vector<cplx> s(nodes.size()), o(nodes.size());
  kernels::serial::synthesize({c.coeffs().data(), std::size_t(c.size())}, N, nodes, s);
  kernels::omp::synthesize({c.coeffs().data(), std::size_t(c.size())}, N, nodes, o);
  for (std::size_t j = 0; j < nodes.size(); ++j) CHECK(std::abs(s[j] - o[j]) < 1e-12);

  std::vector<cplx> as(2 * N + 1), ao(2 * N + 1);
  kernels::serial::analyze(s, nodes, N, as);
  kernels::omp::analyze(s, nodes, N, ao);
  for (int i = 0; i < 2 * N + 1; ++i) {
    CHECK(std::abs(as[i] - ao[i]) < 1e-13);
    CHECK(std::abs(as[i] - c.coeffs()[i]) < 1e-12);
  }

  const kernels::PointwiseStencil st{0.3, 1.0};
  const auto qs = kernels::serial::quadrature_assemble_l(st, 8, 64);
  const auto qo = kernels::omp::quadrature_assemble_l(st, 8, 64);
  CHECK((qs - qo).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(kernels::omp::max_threads() >= 1);
}
