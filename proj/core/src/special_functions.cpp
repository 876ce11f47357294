#include "qdiff/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qdiff/constants.hpp"
#include "qdiff/errors.hpp"

namespace qdiff {

namespace {

void check_arguments(int order, double x) {
  if (order != 0 && order != 1) {
    throw DomainError("bessel: only orders 0 and 1 are supported, got " +
                      std::to_string(order));
  }
  if (!std::isfinite(x)) throw DomainError("bessel: argument is not finite");
  if (x < 0.0) throw DomainError("bessel: argument must be non-negative");
}

}  // namespace

namespace detail {

double bessel_i_scaled_series(int order, double x) {
  // sum_k (x/2)^{2k+n} / (k! (k+n)!), all terms positive
  const double half = 0.5 * x;
  const double q = half * half;
  double term = (order == 0) ? 1.0 : half;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum * std::exp(-x);
}

double bessel_i_scaled_asymptotic(int order, double x) {
  // e^{-x} I_n(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(n) / x^k,
  // truncated at the smallest term.
  const double mu = 4.0 * order * order;
  double term = 1.0;
  double sum = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * x);
    const double magnitude = std::fabs(term);
    if (magnitude >= previous) break;
    sum += term;
    previous = magnitude;
    if (magnitude < 1e-17 * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2.0 * constants::pi * x);
}

}  // namespace detail

double bessel_i_scaled(int order, double x) {
  check_arguments(order, x);
  if (x <= kBesselSeriesLimit) return detail::bessel_i_scaled_series(order, x);
  return detail::bessel_i_scaled_asymptotic(order, x);
}

double bessel_i(int order, double x) {
  check_arguments(order, x);
  if (x <= kBesselSeriesLimit) {
    return detail::bessel_i_scaled_series(order, x) * std::exp(x);
  }
  return detail::bessel_i_scaled_asymptotic(order, x) * std::exp(x);
}

ScaledBessel scaled_bessel(int order, double x) {
  return {bessel_i_scaled(order, x), order, x};
}

double find_root(const ScalarFunction& f, Bracket bracket, double tol,
                 int max_iterations) {
  double a = bracket.lo;
  double b = bracket.hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!(std::isfinite(fa) && std::isfinite(fb)) || std::signbit(fa) == std::signbit(fb)) {
    throw BracketError("find_root: no sign change over [" + std::to_string(a) +
                       ", " + std::to_string(b) + "]");
  }

  // side = which end was retained on the previous step (for Illinois scaling)
  int side = 0;
  double width = std::fabs(b - a);
  for (int it = 0; it < max_iterations; ++it) {
    double x = (a * fb - b * fa) / (fb - fa);
    const double lo = std::fmin(a, b);
    const double hi = std::fmax(a, b);
    if (!(x > lo && x < hi)) x = 0.5 * (a + b);

    const double fx = f(x);
    if (std::fabs(fx) <= tol) return x;

    if (std::signbit(fx) == std::signbit(fb)) {
      b = x;
      fb = fx;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = x;
      fa = fx;
      if (side == +1) fb *= 0.5;
      side = +1;
    }

    const double new_width = std::fabs(b - a);
    const double mid = 0.5 * (a + b);
    if (new_width <= tol * std::fmax(1.0, std::fabs(mid))) return mid;

    // Force a bisection when false position stalls on one side.
    if (new_width > 0.5 * width) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if (std::fabs(fm) <= tol) return m;
      if (std::signbit(fm) == std::signbit(fb)) {
        b = m;
        fb = fm;
      } else {
        a = m;
        fa = fm;
      }
      side = 0;
    }
    width = std::fabs(b - a);
    if (width <= tol * std::fmax(1.0, std::fabs(0.5 * (a + b)))) return 0.5 * (a + b);
  }
  throw ConvergenceError("find_root: no convergence after " +
                         std::to_string(max_iterations) + " iterations");
}

Bracket expand_bracket_upward(const ScalarFunction& f, Bracket start, int max_doublings) {
  const double flo = f(start.lo);
  double hi = start.hi;
  for (int i = 0; i <= max_doublings; ++i) {
    const double fhi = f(hi);
    if (std::isfinite(fhi) && std::signbit(fhi) != std::signbit(flo)) return {start.lo, hi};
    hi = start.lo + 2.0 * (hi - start.lo);
  }
  throw BracketError("expand_bracket_upward: no sign change after " +
                     std::to_string(max_doublings) + " doublings");
}

}  // namespace qdiff
