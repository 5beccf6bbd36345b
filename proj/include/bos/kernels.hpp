#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// kernels::serial and an OpenMP version in kernels::omp with identical
// results up to floating-point reassociation; the rest of the library calls
// the OpenMP versions.

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace bos::kernels {

using cplx = std::complex<double>;

/// Coefficients (a, b) for pointwise evaluation of l[e^{inx}].
struct PointwiseStencil {
  double a;
  double b;
};

namespace serial {

/// out[j] = sum_{n=-N}^{N} coeffs[n+N] e^{i n nodes[j]}, Horner in e^{ix}.
void synthesize(std::span<const cplx> coeffs, int N,
                std::span<const double> nodes, std::span<cplx> out);

/// c_n = (1/K) sum_j f_j e^{-i n x_j} for n = -N..N on a uniform grid.
void analyze(std::span<const cplx> values, std::span<const double> nodes,
             int N, std::span<cplx> out);

/// Column n of the returned (2N+1)x(2N+1) matrix is the trapezoidal-rule
/// projection of l[e^{inx}] onto modes -N..N using K grid points, with l
/// evaluated pointwise from its expanded form.
Eigen::MatrixXcd quadrature_assemble_l(PointwiseStencil s, int N, int K);

}  // namespace serial

namespace omp {

void synthesize(std::span<const cplx> coeffs, int N,
                std::span<const double> nodes, std::span<cplx> out);

void analyze(std::span<const cplx> values, std::span<const double> nodes,
             int N, std::span<cplx> out);

Eigen::MatrixXcd quadrature_assemble_l(PointwiseStencil s, int N, int K);

/// Threads available to the OpenMP kernels (1 without OpenMP).
int max_threads();

}  // namespace omp

}  // namespace bos::kernels
