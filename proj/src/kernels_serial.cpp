#include "bos/kernels.hpp"

#include "kernels_impl.hpp"

namespace bos::kernels::serial {

void synthesize(std::span<const cplx> coeffs, int N,
                std::span<const double> nodes, std::span<cplx> out) {
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    out[j] = detail::horner(coeffs, N, nodes[j]);
  }
}

void analyze(std::span<const cplx> values, std::span<const double> nodes,
             int N, std::span<cplx> out) {
  for (int n = -N; n <= N; ++n) {
    out[n + N] = detail::project_mode(values, nodes, n);
  }
}

Eigen::MatrixXcd quadrature_assemble_l(PointwiseStencil s, int N, int K) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1);
  const auto w = detail::roots_of_unity(K);
  for (int n = -N; n <= N; ++n) detail::quadrature_column(s, N, K, w, n, out);
  return out;
}

}  // namespace bos::kernels::serial
