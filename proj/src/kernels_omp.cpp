#include "bos/kernels.hpp"

#include "kernels_impl.hpp"

#ifdef BOS_HAVE_OPENMP
#include <omp.h>
#endif

namespace bos::kernels::omp {

void synthesize(std::span<const cplx> coeffs, int N,
                std::span<const double> nodes, std::span<cplx> out) {
  const auto count = static_cast<std::ptrdiff_t>(nodes.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    out[j] = detail::horner(coeffs, N, nodes[j]);
  }
}

void analyze(std::span<const cplx> values, std::span<const double> nodes,
             int N, std::span<cplx> out) {
#pragma omp parallel for schedule(static)
  for (int n = -N; n <= N; ++n) {
    out[n + N] = detail::project_mode(values, nodes, n);
  }
}

Eigen::MatrixXcd quadrature_assemble_l(PointwiseStencil s, int N, int K) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1);
  const auto w = detail::roots_of_unity(K);
  // columns are disjoint
#pragma omp parallel for schedule(dynamic)
  for (int n = -N; n <= N; ++n) detail::quadrature_column(s, N, K, w, n, out);
  return out;
}

int max_threads() {
#ifdef BOS_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace bos::kernels::omp
