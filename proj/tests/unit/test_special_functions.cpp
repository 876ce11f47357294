#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/special_functions.hpp"

using namespace qdiff;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
}  // namespace

TEST_CASE("bessel_i at the origin") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(1, 0.0) == 0.0);
  CHECK(bessel_i_scaled(0, 0.0) == 1.0);
  CHECK(bessel_i_scaled(1, 0.0) == 0.0);
}

TEST_CASE("bessel_i(0, 1) against the long-double power series") {
  // Series oracle: 1.266065877752008335598244625214717537607670311354962206...
  const double expected = static_cast<double>(oracle::bessel_series(0, 1.0L));
  CHECK(rel(expected, 1.2660658777520083) < 1e-15);
  CHECK(rel(bessel_i(0, 1.0), expected) < 1e-12);
}

TEST_CASE("series branch matches the long-double oracle to 1e-12") {
  for (int n = 0; n <= 1; ++n) {
    for (double x = 0.01; x <= kBesselSeriesLimit; x += 0.37) {
      const double expected = static_cast<double>(oracle::bessel_series(n, x));
      CAPTURE(n);
      CAPTURE(x);
      CHECK(rel(bessel_i(n, x), expected) < 1e-12);
    }
  }
}

TEST_CASE("asymptotic branch matches the series oracle on the scaled value") {
  for (int n = 0; n <= 1; ++n) {
    for (double x = 15.5; x <= 40.0; x += 1.5) {
      const long double ex = oracle::bessel_series(n, x) * std::exp(-static_cast<long double>(x));
      CAPTURE(x);
      CHECK(rel(bessel_i_scaled(n, x), static_cast<double>(ex)) < 1e-12);
    }
  }
}

TEST_CASE("branches agree across the overlap window [12, 18]") {
  for (int n = 0; n <= 1; ++n) {
    for (double x = 12.0; x <= 18.0; x += 0.25) {
      const double s = detail::bessel_i_scaled_series(n, x);
      const double a = detail::bessel_i_scaled_asymptotic(n, x);
      CAPTURE(x);
      CHECK(rel(a, s) < 1e-10);
    }
  }
}

TEST_CASE("agrees with std::cyl_bessel_i") {
  for (double x : {0.3, 2.0, 7.5, 14.9, 15.1, 25.0, 60.0, 200.0}) {
    CHECK(rel(bessel_i(0, x), std::cyl_bessel_i(0.0, x)) < 1e-12);
    CHECK(rel(bessel_i(1, x), std::cyl_bessel_i(1.0, x)) < 1e-12);
  }
}

TEST_CASE("scaled value at large x") {
  // Two-term asymptotic oracle for x = 100 and the one-term expansion at x >= 30.
  const double x = 100.0;
  CHECK(rel(bessel_i_scaled(0, x), 1.0 / std::sqrt(2.0 * M_PI * x)) < 3e-3);
  CHECK(rel(bessel_i_scaled(0, x), oracle::bessel_scaled_two_term(0, x)) < 1e-5);
  // The leading-order expansion is off by the first correction 1/(8x):
  // 0.42% at x = 30, below 0.1% from x = 125 on.
  for (double y = 30.0; y < 1e4; y *= 1.7) {
    const double dev = rel(bessel_i_scaled(0, y), 1.0 / std::sqrt(2.0 * M_PI * y));
    CHECK(dev < 1.05 / (8.0 * y));
    if (y >= 125.0) CHECK(dev < 1e-3);
  }
  CHECK(std::isfinite(bessel_i_scaled(0, 1e300)));
  CHECK(bessel_i_scaled(0, 1e300) > 0.0);
}

TEST_CASE("ScaledBessel invariants") {
  for (double x = 0.0; x < 500.0; x = x * 1.3 + 0.05) {
    const auto b0 = scaled_bessel(0, x);
    const auto b1 = scaled_bessel(1, x);
    CHECK(b0.value > 0.0);
    CHECK(b0.value <= 1.0);
    CHECK(b1.value >= 0.0);
    if (x > 0.0) CHECK(b1.value > 0.0);
    const double ratio = b1.value / b0.value;
    CHECK(ratio >= 0.0);
    CHECK(ratio < 1.0);
  }
}

TEST_CASE("scaled and unscaled routes are consistent up to x = 300") {
  for (double x = 0.0; x <= 300.0; x += 2.9) {
    for (int n = 0; n <= 1; ++n) {
      const double direct = bessel_i(n, x);
      const double via = std::exp(x) * bessel_i_scaled(n, x);
      if (direct == 0.0) {
        CHECK(via == 0.0);
      } else {
        CHECK(rel(via, direct) < 1e-10);
      }
    }
  }
}

TEST_CASE("I0' = I1 by central differences") {
  for (double x = 0.1; x <= 20.0; x += 0.45) {
    const double h = 1e-5 * std::fmax(1.0, x);
    const double d = (bessel_i(0, x + h) - bessel_i(0, x - h)) / (2.0 * h);
    CHECK(rel(d, bessel_i(1, x)) < 1e-6);
  }
}

TEST_CASE("x^2 (I0^2 - I1^2) is positive and strictly increasing on [0, 50]") {
  double previous = 0.0;
  for (double x = 0.05; x <= 50.0; x += 0.05) {
    const double i0 = bessel_i(0, x), i1 = bessel_i(1, x);
    const double diff = i0 * i0 - i1 * i1;
    CHECK(diff > 0.0);
    const double f = x * x * diff;
    CHECK(f > previous);
    previous = f;
  }
}

TEST_CASE("bessel domain errors") {
  CHECK_THROWS_AS(bessel_i(0, std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(bessel_i_scaled(1, std::numeric_limits<double>::infinity()), DomainError);
  CHECK_THROWS_AS(bessel_i(0, -1.0), DomainError);
  CHECK_THROWS_AS(bessel_i(2, 1.0), DomainError);
}

TEST_CASE("find_root on simple functions") {
  CHECK(find_root([](double x) { return x - 2.0; }, {0.0, 5.0}, 1e-14) ==
        doctest::Approx(2.0).epsilon(1e-13));
  const double r = find_root([](double x) { return x * x - 2.0; }, {1.0, 2.0}, 1e-13);
  CHECK(std::fabs(r - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("find_root is deterministic") {
  auto f = [](double x) { return std::cos(x) - x; };
  CHECK(find_root(f, {0.0, 1.0}, 1e-12) == find_root(f, {0.0, 1.0}, 1e-12));
}

TEST_CASE("find_root inverts the Bessel time kernel on an auto-expanded bracket") {
  auto f = [](double x) {
    const double i0 = bessel_i(0, x), i1 = bessel_i(1, x);
    return x * x * (i0 * i0 - i1 * i1) - 1.0;
  };
  const auto bracket = expand_bracket_upward(f, {1e-8, 0.1});
  const double root = find_root(f, bracket, 1e-13);
  // forward substitution
  CHECK(std::fabs(f(root)) < 1e-12);
  CHECK(root > 0.0);
}

TEST_CASE("find_root errors") {
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, {-1.0, 1.0}, 1e-12),
                  BracketError);
  // a sign change that never resolves within two iterations
  CHECK_THROWS_AS(find_root([](double x) { return std::atan(x - M_PI); }, {0.0, 1e6}, 1e-300, 2),
                  ConvergenceError);
  CHECK_THROWS_AS(expand_bracket_upward([](double) { return 1.0; }, {0.0, 1.0}, 10),
                  BracketError);
}
