#pragma once

#include <functional>
#include <span>
#include <vector>

#include "bos/fourier.hpp"
#include "bos/params.hpp"

namespace bos {

/// Quadrature controls for the explicit inverse of M.
struct InverseProfile {
  /// Radius around {-pi, 0, pi} inside which the two-level self-consistency
  /// check is skipped.
  double x_cut = 1e-3;
  /// Gauss-Legendre nodes per panel.
  int quad_order = 16;
  /// Ratio of consecutive panel lengths in the geometric grading toward the
  /// singular endpoints.
  double graded_ratio = 0.5;
  /// Geometric panels toward t = 0 on each half-interval.
  int panels = 40;
  /// Recompute every node with the finer grading sqrt(graded_ratio) and
  /// compare.
  bool self_check = true;
  double check_tol = 1e-9;

  /// Throws Error(invalid_argument) unless 0 < x_cut < 0.1, quad_order >= 8,
  /// graded_ratio in (0, 1) and panels >= 4.
  void validate() const;
};

/// Exponents of the integrating factor mu(x) = tan(x/2)^{1/b} sin(x)^{-a/b}
/// that appear in the explicit inverse.
struct KernelExponents {
  double prefactor_sin;   // a/b
  double prefactor_cot;   // 1/b
  double integrand_sin;   // -a/b
  double integrand_tan;   // 1/b
  double zero_exponent;   // (1-a)/b - 1, power of t of the integrand at 0
  double pi_exponent;     // -(1+a)/b, growth of the integral toward +-pi

  static KernelExponents of(double a, double b);

  /// The kernel is square integrable at 0 iff zero_exponent > -1/2, which is
  /// the same region as 2a + b < 2 for b > 0.
  bool l2_admissible() const noexcept { return zero_exponent > -0.5; }
};

using ComplexFunction = std::function<cplx(double)>;

/// Solution of b sin x y' + (1 - a cos x) y = u that stays bounded at 0:
///
///   y(x) = (1/b) mu(x)^{-1} int_0^x u(t) mu(t) / sin t dt,
///   mu(t) = tan(|t|/2)^{1/b} sin(|t|)^{-a/b}.
///
/// The ratio mu(t)/mu(x) is formed in log space, so the product of the large
/// prefactor and the small integral never overflows. At x = 0 and x = +-pi the
/// one-sided limits u(0)/(1-a) and u(+-pi)/(1+a) are returned.
class ClosedFormInverse {
 public:
  ClosedFormInverse(const OperatorParams& p, InverseProfile profile = {});

  /// Value at one node. Throws Error(quadrature_non_convergence) when the self
  /// check is on and the two grading levels disagree.
  cplx operator()(const ComplexFunction& u, double x) const;

  /// Maps over nodes (OpenMP-parallel).
  GridFunction evaluate(const ComplexFunction& u,
                        std::span<const double> nodes) const;
  GridFunction evaluate_serial(const ComplexFunction& u,
                               std::span<const double> nodes) const;

  const OperatorParams& params() const noexcept { return params_; }
  const InverseProfile& profile() const noexcept { return profile_; }

 private:
  cplx integrate(const ComplexFunction& u, double x, double ratio, int panels) const;

  OperatorParams params_;
  InverseProfile profile_;
  std::vector<double> gauss_x_, gauss_w_;  // on [0, 1]
};

/// Convenience wrappers around ClosedFormInverse.
GridFunction minv_closed_form(const OperatorParams& p, const ComplexFunction& u,
                              std::span<const double> nodes,
                              const InverseProfile& profile = {});
GridFunction minv_closed_form(const OperatorParams& p, const FourierVector& u,
                              std::span<const double> nodes,
                              const InverseProfile& profile = {});

/// Galerkin solve of M_N y = u with the banded LU (u is embedded in modes
/// -N..N).
FourierVector minv_fourier(const OperatorParams& p, const FourierVector& u, int N);

/// Adaptive Dormand-Prince integration of b sin x y' + (1 - a cos x) y = u
/// outward from +-x0, started from the regular power series at 0. Nodes with
/// |x| <= x0 are filled from the series; nodes at +-pi get the limit
/// u(+-pi)/(1+a).
GridFunction minv_ode(const OperatorParams& p, const FourierVector& u,
                      std::span<const double> nodes, double x0 = 1e-2,
                      double tol = 1e-12);

struct Y0Profile {
  GridFunction grid;
  double value_at_zero = 0.0;     // 1/(1-a)
  double value_at_pi = 0.0;       // 1/(1+a)
  double evenness_defect = 0.0;   // max |y0(x) - y0(-x)| over the grid
  double periodicity_defect = 0.0;  // |y0(pi) - y0(-pi)|
};

/// y0 = M^{-1} 1 on `nodes` (symmetric nodes are added when missing so the
/// evenness defect is measured on mirrored pairs).
Y0Profile compute_y0(const OperatorParams& p, std::span<const double> nodes,
                     const InverseProfile& profile = {});

/// int_{-pi}^{pi} y0(x) w(x) dx by graded Gauss quadrature in x.
double integrate_y0(const OperatorParams& p, const std::function<double(double)>& weight,
                    const InverseProfile& profile = {});

struct Z0Result {
  FourierVector z0;
  /// (1, z0) = 2 pi conj(z0_0)
  cplx one_dot_z0;
  /// max-norm residual of Mstar z0 - e_0
  double residual = 0.0;
};

/// z0 = (M*)^{-1} 1 by the banded solve on modes -N..N.
Z0Result compute_z0(const OperatorParams& p, int N);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre01(int order, std::vector<double>& x, std::vector<double>& w);

}  // namespace bos
