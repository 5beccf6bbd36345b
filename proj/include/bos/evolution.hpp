#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bos/fourier.hpp"
#include "bos/params.hpp"

namespace bos {

enum class Scheme { rk4, expm };

std::string to_string(Scheme s);
/// Accepts "rk4", "expm" and "exact-expm".
Scheme parse_scheme(const std::string& name);

struct EvolutionTrace {
  std::vector<double> times;  // checkpoint times, strictly increasing from 0
  std::vector<double> l2_norms;
  std::vector<double> h1_norms;
  std::vector<cplx> means;
  std::vector<FourierVector> snapshots;  // one per checkpoint when requested
  double growth_factor = 1.0;            // max_t l2(t) / l2(0)
  bool blowup = false;                   // trace truncated at a non-finite state
  double last_finite_time = 0.0;
  /// Time of the first non-finite state; NaN without blow-up.
  double blowup_time = std::numeric_limits<double>::quiet_NaN();
  /// rk4 only: max over checkpoints of |one step of dt - two steps of dt/2|,
  /// relative to |y|. Zero for expm.
  double step_halving_error = 0.0;
};

struct EvolveOptions {
  double checkpoint = 0.1;
  bool keep_snapshots = false;
};

/// dy/dt = -L_N y from y_init on [0, t_max]. Norms recorded every
/// options.checkpoint (rounded to a whole number of steps) and at t_max.
EvolutionTrace evolve(const OperatorParams& p, int N, const FourierVector& y_init,
                      double dt, double t_max, Scheme scheme,
                      const EvolveOptions& options = {});

/// Matrix stored as value * exp(log_scale) so that powers past the double
/// range stay representable.
struct ScaledMatrix {
  Eigen::MatrixXcd value;
  double log_scale = 0.0;
};

/// exp(t A) by scaling and squaring with renormalization after every square.
ScaledMatrix scaled_expm(const Eigen::MatrixXcd& A, double t);

/// log of the spectral norm of a ScaledMatrix.
double log_norm2(const ScaledMatrix& m);

struct GrowthRow {
  int N = 0;
  double t = 0.0;
  double log10_norm = 0.0;  // log10 ||exp(-t L11_N)||_2
  double norm = 1.0;        // 10^log10_norm, infinite past the double range
};

/// Semigroup norms of the truncated L11 block. Requires ascending N_list.
std::vector<GrowthRow> growth_envelope(const OperatorParams& p, const std::vector<int>& N_list,
                                       const std::vector<double>& t_grid);

/// max over t of log10_norm, one entry per N in order of first appearance.
std::vector<std::pair<int, double>> envelope_maxima(const std::vector<GrowthRow>& rows);

/// Initial data presets: "bump", "constant", "random", "mode:k" (k-th
/// eigenvector of L11_N ordered by |lambda|, then Im lambda; 1-based).
FourierVector initial_preset(const std::string& name, const OperatorParams& p, int N,
                             std::uint64_t seed);

}  // namespace bos
