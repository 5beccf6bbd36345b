#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bos/closed_form_inverse.hpp"
#include "bos/fourier.hpp"
#include "bos/params.hpp"

namespace bos::cli {

using Rng = std::mt19937_64;

/// sum_{|n| <= degree} c_n e^{inx}, Re/Im c_n uniform in (-1, 1) scaled by
/// 1/(1 + |n|), embedded in modes -N..N.
FourierVector random_trig_polynomial(Rng& rng, int degree, int N);

/// Uniform(-1, 1)^2 coefficients on modes 0 < |n| <= N, mean zero.
FourierVector random_mean_zero(Rng& rng, int N);

/// Indices j of uniform_grid(K) with delta <= |x_j| <= pi - delta.
std::vector<int> excluded_indices(double delta, int K);

/// Rectangle-rule L2 distance over the excluded-grid samples.
double excluded_l2(const GridFunction& f, const GridFunction& g, int K);

struct TriangleResult {
  double closed_vs_fourier = 0.0;
  double closed_vs_ode = 0.0;
  double fourier_vs_ode = 0.0;
  double max() const;
};

/// Three inverses of M applied to u, compared in L2 on the nodes of a K-point
/// uniform grid away from the singular points.
TriangleResult oracle_triangle(const OperatorParams& p, const FourierVector& u, double delta,
                               int K, int fourier_N, const InverseProfile& profile = {});

inline constexpr int kTriangleGrid = 1024;

inline constexpr int kTriangleFourierN = 131072;
inline constexpr int kCrossPipelineN = 1 << 18;

}  // namespace bos::cli
