#include <doctest.h>

#include <cmath>
#include <limits>

#include "bos/error.hpp"
#include "bos/params.hpp"

using bos::Error;
using bos::ErrorCode;
using bos::OperatorParams;

namespace {

ErrorCode code_of(double a, double b) {
  try {
    OperatorParams::validate(a, b);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected rejection");
  return ErrorCode::io;
}

}  // namespace

TEST_CASE("validate accepts the interior and reports the margin") {
  const auto p = OperatorParams::validate(0.3, 1.0);
  CHECK(p.a() == 0.3);
  CHECK(p.b() == 1.0);
  CHECK(p.margin() == doctest::Approx(0.4));
  CHECK_FALSE(p.degenerate_drainage());
  CHECK(p.hermitian_part_floor() == doctest::Approx(0.2));
}

TEST_CASE("a = 0 is admitted and flagged") {
  const auto p = OperatorParams::validate(0.0, 1.0);
  CHECK(p.degenerate_drainage());
  CHECK(p.hermitian_part_floor() == doctest::Approx(0.5));
}

TEST_CASE("boundary and outside points are regime violations") {
  CHECK(code_of(0.5, 1.0) == ErrorCode::regime_violation);  // 2a + b = 2
  CHECK(code_of(0.5, 1.5) == ErrorCode::regime_violation);
  CHECK(code_of(-0.1, 1.0) == ErrorCode::regime_violation);
  CHECK(code_of(0.1, 0.0) == ErrorCode::regime_violation);
  CHECK(code_of(0.1, -1.0) == ErrorCode::regime_violation);
  CHECK(code_of(0.0, 2.0) == ErrorCode::regime_violation);
}

TEST_CASE("non-finite input is an invalid argument") {
  CHECK(code_of(std::nan(""), 1.0) == ErrorCode::invalid_argument);
  CHECK(code_of(0.1, std::numeric_limits<double>::infinity()) == ErrorCode::invalid_argument);
}

TEST_CASE("admissible matches validate on a 0.05 grid") {
  for (int i = -2; i <= 22; ++i) {
    for (int j = -2; j <= 46; ++j) {
      const double a = i / 20.0, b = j / 20.0;
      const bool expected = i >= 0 && j > 0 && 2 * i + j < 40;
      bool got = true;
      try {
        OperatorParams::validate(a, b);
      } catch (const Error&) {
        got = false;
      }
      CAPTURE(a);
      CAPTURE(b);
      CHECK(got == expected);
      CHECK(OperatorParams::admissible(a, b) == expected);
    }
  }
}

TEST_CASE("error codes have stable names") {
  CHECK(bos::to_string(ErrorCode::regime_violation) == "regime_violation");
  CHECK(bos::to_string(ErrorCode::quadrature_non_convergence) == "quadrature_non_convergence");
  CHECK(Error(ErrorCode::eigensolver_failure, "x").is_numerical());
  CHECK_FALSE(Error(ErrorCode::aliasing, "x").is_numerical());
}
