#include "common.hpp"

#include <algorithm>
#include <cmath>

namespace bos::cli {

FourierVector random_trig_polynomial(Rng& rng, int degree, int N) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierVector c(N);
  for (int n = -degree; n <= degree; ++n) {
    const double re = u(rng), im = u(rng);
    if (std::abs(n) <= N) c[n] = cplx(re, im) / (1.0 + std::abs(n));
  }
  return c;
}

FourierVector random_mean_zero(Rng& rng, int N) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierVector c(N);
  for (int n = -N; n <= N; ++n) {
    const double re = u(rng), im = u(rng);
    if (n != 0) c[n] = cplx(re, im);
  }
  return c;
}

std::vector<int> excluded_indices(double delta, int K) {
  const auto grid = uniform_grid(K);
  std::vector<int> out;
  for (int j = 0; j < K; ++j) {
    const double x = std::abs(grid[j]);
    if (x >= delta && x <= kPi - delta) out.push_back(j);
  }
  return out;
}

double excluded_l2(const GridFunction& f, const GridFunction& g, int K) {
  double sum = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) sum += std::norm(f.values[j] - g.values[j]);
  return std::sqrt(sum * kTwoPi / K);
}

double TriangleResult::max() const {
  return std::max({closed_vs_fourier, closed_vs_ode, fourier_vs_ode});
}

TriangleResult oracle_triangle(const OperatorParams& p, const FourierVector& u, double delta,
                               int K, int fourier_N, const InverseProfile& profile) {
  const auto idx = excluded_indices(delta, K);
  const auto grid = uniform_grid(K);
  const GridFunction full = synthesize_uniform(minv_fourier(p, u, fourier_N), K);
  GridFunction fourier;
  for (int j : idx) {
    fourier.nodes.push_back(grid[j]);
    fourier.values.push_back(full.values[j]);
  }
  const GridFunction closed = minv_closed_form(p, u, fourier.nodes, profile);
  const GridFunction ode = minv_ode(p, u, fourier.nodes);
  return {excluded_l2(closed, fourier, K), excluded_l2(closed, ode, K),
          excluded_l2(fourier, ode, K)};
}

}  // namespace bos::cli
