#pragma once

// Dormand-Prince 5(4) with Hairer's 4th-order continuous extension.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "qdiff/errors.hpp"

namespace qdiff {

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Non-zero: take fixed steps of this size with no error control.
  double fixed_step = 0.0;
  double initial_step = 0.0;
  double min_step = 1e-14;
  std::size_t max_steps = 10'000'000;
};

template <std::size_t N>
using OdeState = std::array<double, N>;

namespace detail {

template <std::size_t N>
double error_norm(const OdeState<N>& err, const OdeState<N>& y0, const OdeState<N>& y1,
                  const OdeOptions& opt) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double sc = opt.abs_tol + opt.rel_tol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
    const double r = err[i] / sc;
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(N));
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to the last entry of `outputs` (which
/// must be non-decreasing and >= t0) and calls observe(t, y, dy) at every
/// output time using dense output. `check(t, y)` runs after each accepted
/// step and may throw to abort.
template <std::size_t N, class Rhs, class Observer, class Check>
void integrate_dopri5(Rhs&& rhs, double t0, OdeState<N> y0, std::span<const double> outputs,
                      const OdeOptions& opt, Observer&& observe, Check&& check) {
  using State = OdeState<N>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  if (outputs.empty()) return;
  std::size_t next_out = 0;
  double t = t0;
  State y = y0;
  State k1 = rhs(t, y);
  while (next_out < outputs.size() && outputs[next_out] <= t) {
    observe(outputs[next_out], y, k1);
    ++next_out;
  }
  if (next_out == outputs.size()) return;
  const double t_end = outputs.back();

  double h = opt.fixed_step;
  const bool adaptive = h <= 0.0;
  if (adaptive) {
    h = opt.initial_step;
    if (h <= 0.0) {
      // Crude Hairer-style starting guess.
      double ny = 0.0, nf = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sc = opt.abs_tol + opt.rel_tol * std::fabs(y[i]);
        ny += (y[i] / sc) * (y[i] / sc);
        nf += (k1[i] / sc) * (k1[i] / sc);
      }
      h = (ny < 1e-10 || nf < 1e-10) ? 1e-6 : 0.01 * std::sqrt(ny / nf);
      h = std::min(h, t_end - t);
    }
  }

  State ytmp{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, y1{}, err{};
  std::size_t steps = 0;
  while (t < t_end) {
    if (++steps > opt.max_steps) throw StiffnessError("dopri5: step budget exhausted");
    bool last = false;
    if (t + h >= t_end) {
      h = t_end - t;
      last = true;
    }
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    k2 = rhs(t + c2 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = rhs(t + h, ytmp);
    for (std::size_t i = 0; i < N; ++i)
      y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = rhs(t + h, y1);

    double err_norm = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      finite = finite && std::isfinite(y1[i]) && std::isfinite(err[i]);
    }
    if (adaptive) {
      err_norm = finite ? detail::error_norm<N>(err, y, y1, opt) : 1e10;
      if (err_norm > 1.0) {
        h *= finite ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2)) : 0.1;
        if (h < opt.min_step * std::max(1.0, std::fabs(t))) {
          throw StiffnessError("dopri5: step size underflow at t = " + std::to_string(t));
        }
        continue;
      }
    } else if (!finite) {
      throw StiffnessError("dopri5: non-finite state with fixed step at t = " + std::to_string(t));
    }

    const double t_new = last ? t_end : t + h;
    // continuous extension coefficients
    State r2{}, r3{}, r4{}, r5{};
    for (std::size_t i = 0; i < N; ++i) {
      const double ydiff = y1[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      r2[i] = ydiff;
      r3[i] = bspl;
      r4[i] = ydiff - h * k7[i] - bspl;
      r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    while (next_out < outputs.size() && outputs[next_out] <= t_new) {
      const double th = (outputs[next_out] - t) / h;
      const double th1 = 1.0 - th;
      State yo{}, dyo{};
      for (std::size_t i = 0; i < N; ++i) {
        const double p = r3[i] + th * (r4[i] + th1 * r5[i]);
        yo[i] = y[i] + th * (r2[i] + th1 * p);
        dyo[i] = (r2[i] + (1.0 - 2.0 * th) * p + th * th1 * (r4[i] + (1.0 - 2.0 * th) * r5[i])) / h;
      }
      if (outputs[next_out] == t_new) {
        yo = y1;
        dyo = k7;
      }
      observe(outputs[next_out], yo, dyo);
      ++next_out;
    }

    t = t_new;
    y = y1;
    k1 = k7;
    check(t, y);

    if (adaptive) {
      const double fac = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 10.0;
      h *= std::clamp(fac, 0.2, 10.0);
    }
  }
}

}  // namespace qdiff
