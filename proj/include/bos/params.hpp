#pragma once

namespace bos {

/// Coefficients (a, b) of l[y] = d/dx((1 - a cos x) y + b sin x y').
///
/// Construction goes through validate(), which admits exactly the open region
/// a >= 0, b > 0, 2a + b < 2. The a = 0 edge is accepted and flagged as the
/// degenerate-drainage regime.
class OperatorParams {
 public:
  /// Throws Error(regime_violation) outside the admissible region and
  /// Error(invalid_argument) for non-finite input.
  static OperatorParams validate(double a, double b);

  /// Same predicate as validate() without throwing.
  static bool admissible(double a, double b) noexcept;

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  /// 2 - (2a + b), strictly positive.
  double margin() const noexcept { return 2.0 - (2.0 * a_ + b_); }

  bool degenerate_drainage() const noexcept { return a_ == 0.0; }

  /// Lower bound 1 - (a + b/2) of the symbol of the Hermitian part of M.
  double hermitian_part_floor() const noexcept { return 1.0 - (a_ + 0.5 * b_); }

 private:
  OperatorParams(double a, double b) : a_(a), b_(b) {}
  double a_;
  double b_;
};

}  // namespace bos
