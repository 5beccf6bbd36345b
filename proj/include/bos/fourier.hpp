#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bos {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Truncated Fourier series y(x) = sum_{n=-N}^{N} c_n e^{inx}.
///
/// Storage index of mode n is n + N. Inner products use the unnormalized
/// convention <f, g> = int_{-pi}^{pi} f conj(g) dx, so <e^{inx}, e^{imx}> is
/// 2 pi delta_{nm}.
class FourierVector {
 public:
  FourierVector() = default;
  explicit FourierVector(int N);
  FourierVector(int N, Eigen::VectorXcd coeffs);

  static FourierVector constant(int N, cplx value);

  int N() const noexcept { return N_; }
  Eigen::Index size() const noexcept { return coeffs_.size(); }

  cplx& operator[](int n) { return coeffs_[n + N_]; }
  cplx operator[](int n) const { return coeffs_[n + N_]; }

  const Eigen::VectorXcd& coeffs() const noexcept { return coeffs_; }
  Eigen::VectorXcd& coeffs() noexcept { return coeffs_; }

  cplx mean() const { return (*this)[0]; }
  double l2_norm() const;
  /// sqrt(2 pi sum (1 + n^2) |c_n|^2)
  double h1_norm() const;

  /// Embed into a wider (or clip to a narrower) symmetric truncation.
  FourierVector resized(int N) const;

 private:
  int N_ = 0;
  Eigen::VectorXcd coeffs_;
};

/// <f, g> = 2 pi sum f_n conj(g_n).
cplx inner(const FourierVector& f, const FourierVector& g);

/// Function samples on an increasing set of nodes in [-pi, pi].
struct GridFunction {
  std::vector<double> nodes;
  std::vector<cplx> values;

  /// Throws Error(invalid_argument) unless nodes are strictly increasing,
  /// inside [-pi, pi] and match values in length.
  void validate() const;
  std::size_t size() const noexcept { return nodes.size(); }
};

/// K equispaced periodic nodes x_j = -pi + 2 pi j / K, j = 0..K-1.
std::vector<double> uniform_grid(int K);

/// values[j] = sum_n c_n e^{i n x_j}.
GridFunction synthesize(const FourierVector& c, std::span<const double> nodes);

/// Samples on uniform_grid(K), K even, for any truncation. Modes are folded
/// modulo K first, which is exact on those nodes.
GridFunction synthesize_uniform(const FourierVector& c, int K);

/// Evaluate at a single point.
cplx evaluate(const FourierVector& c, double x);

/// Trigonometric interpolation coefficients of half-width N from samples on a
/// uniform periodic grid with at least 2N + 1 points.
FourierVector analyze(const GridFunction& f, int N);

struct AnalysisReport {
  FourierVector coeffs;
  /// max_j |f_j - synthesize(coeffs)(x_j)| / max_j |f_j|; nonzero when the
  /// samples carry content above mode N.
  double alias_residual = 0.0;
  bool aliased = false;
};

/// analyze() plus a resolution check; `aliased` is set when the relative
/// reconstruction residual exceeds tol.
AnalysisReport analyze_checked(const GridFunction& f, int N, double tol = 1e-10);

/// L2 norm of samples on a uniform periodic grid (rectangle rule).
double grid_l2_norm(const GridFunction& f);

// CSV with header `x,re,im`.
void write_grid_csv(std::ostream& os, const GridFunction& f);
GridFunction read_grid_csv(std::istream& is);
void write_grid_csv(const std::string& path, const GridFunction& f);
GridFunction read_grid_csv(const std::string& path);

}  // namespace bos
