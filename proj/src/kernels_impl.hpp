#pragma once

// Per-element bodies shared by the serial and OpenMP kernels.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "bos/fourier.hpp"
#include "bos/kernels.hpp"

namespace bos::kernels::detail {

inline cplx horner(std::span<const cplx> coeffs, int N, double x) {
  const cplx z = std::polar(1.0, x);
  cplx p = coeffs[2 * N];
  for (int k = 2 * N - 1; k >= 0; --k) p = p * z + coeffs[k];
  return p * std::polar(1.0, -static_cast<double>(N) * x);
}

inline cplx project_mode(std::span<const cplx> values,
                         std::span<const double> nodes, int n) {
  cplx acc = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    acc += values[j] * std::polar(1.0, -static_cast<double>(n) * nodes[j]);
  }
  return acc / static_cast<double>(values.size());
}

/// e^{i 2 pi r / K}, r = 0..K-1.
inline std::vector<cplx> roots_of_unity(int K) {
  std::vector<cplx> w(K);
  for (int r = 0; r < K; ++r) w[r] = std::polar(1.0, kTwoPi * r / K);
  return w;
}

/// l[e^{inx}] / e^{inx} at x.
inline cplx l_symbol(PointwiseStencil s, int n, double x) {
  const double sx = std::sin(x);
  const double cx = std::cos(x);
  const double nn = static_cast<double>(n);
  return cplx(s.a * sx - s.b * nn * nn * sx, nn * (1.0 + (s.b - s.a) * cx));
}

/// Fills column n of the quadrature-assembled L. Grid x_j = -pi + 2 pi j / K.
inline void quadrature_column(PointwiseStencil s, int N, int K,
                              const std::vector<cplx>& w, int n,
                              Eigen::MatrixXcd& out) {
  std::vector<cplx> sym(K);
  for (int j = 0; j < K; ++j) sym[j] = l_symbol(s, n, -kPi + kTwoPi * j / K);
  for (int m = -N; m <= N; ++m) {
    const int k = n - m;
    // e^{i k x_j} = (-1)^k w[(k j) mod K]
    cplx acc = 0.0;
    const long kk = ((k % K) + K) % K;
    for (int j = 0; j < K; ++j) acc += sym[j] * w[(kk * j) % K];
    if (k % 2 != 0) acc = -acc;
    out(m + N, n + N) = acc / static_cast<double>(K);
  }
}

}  // namespace bos::kernels::detail
