#pragma once

#include <functional>

namespace qdiff {

/// Argument at which the modified Bessel evaluation switches from the power
/// series to the large-argument asymptotic expansion.
inline constexpr double kBesselSeriesLimit = 15.0;

/// e^{-x} I_n(x) together with the order and argument it was evaluated at.
struct ScaledBessel {
  double value;
  int order;
  double argument;
};

/// Modified Bessel function of the first kind I_n(x), n in {0, 1}, x >= 0.
/// Overflows to +inf beyond x ~ 713; use bessel_i_scaled there.
double bessel_i(int order, double x);

/// e^{-x} I_n(x), n in {0, 1}, x >= 0. Never overflows.
double bessel_i_scaled(int order, double x);

ScaledBessel scaled_bessel(int order, double x);

namespace detail {
// The two evaluation branches, exposed so the switch can be tested.
double bessel_i_scaled_series(int order, double x);
double bessel_i_scaled_asymptotic(int order, double x);
}  // namespace detail

using ScalarFunction = std::function<double(double)>;

struct Bracket {
  double lo;
  double hi;
};

/// Bracketing root finder: Illinois-style false position with a bisection
/// fallback whenever the bracket fails to halve. Returns x with |f(x)| <= tol
/// or final bracket width <= tol * max(1, |x|).
///
/// Throws BracketError if f(lo) and f(hi) have the same sign, and
/// ConvergenceError after max_iterations.
double find_root(const ScalarFunction& f, Bracket bracket, double tol,
                 int max_iterations = 200);

/// Doubles the distance of the upper end from the lower end until f changes
/// sign over the bracket. Throws BracketError after max_doublings.
Bracket expand_bracket_upward(const ScalarFunction& f, Bracket start,
                              int max_doublings = 200);

}  // namespace qdiff
