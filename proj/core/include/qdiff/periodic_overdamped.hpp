#pragma once

// Zero-temperature overdamped quantum diffusion in U(x) = A cos(q x).
// The wave packet sees a quantum temperature 1/beta_Q = hbar^2 / (4 m sigma^2);
// the Lifson-Jackson rate at that temperature gives
//   d sigma^2 / dt = 2 / (b beta_Q I0^2(beta_Q A)),
// whose time integral is
//   x^2 [I0^2(x) - I1^2(x)] = 16 m A^2 t / (hbar^2 b),  x = beta_Q A.

#include <span>
#include <vector>

#include "qdiff/dynamics.hpp"

namespace qdiff {

struct CosinePotential {
  double amplitude = 0.0;   // A, J
  double wavenumber = 1.0;  // q, 1/m

  double period() const;
  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  void validate() const;
};

struct QuantumTemperatureState {
  double sigma_sq;    // m^2
  double beta_q_inv;  // J

  static QuantumTemperatureState from_sigma_sq(double sigma_sq, const PhysicalSystem& sys);
  double beta_q() const { return 1.0 / beta_q_inv; }
};

struct ScaleSet {
  double lambda_A;  // hbar / (2 sqrt(2 m A)), m
  double omega_A;   // 4 A / hbar, 1/s
  double t_relax;   // b / (m omega_A^2), s
};

/// d sigma^2 / dt from the quantum-temperature Lifson-Jackson rate.
double dispersion_rate(double sigma_sq, const PhysicalSystem& sys, const CosinePotential& pot);

/// Closed-form time at which the dispersion reaches sigma_sq (sigma^2(0) = 0).
/// Requires A > 0.
double time_of_dispersion(double sigma_sq, const PhysicalSystem& sys, const CosinePotential& pot);

/// Inverse of time_of_dispersion by bracketed root finding in ln(beta_Q A).
double dispersion_of_time(double t, const PhysicalSystem& sys, const CosinePotential& pot);

/// Smallest t for which the logarithmic asymptote is positive:
/// hbar^2 b / (32 pi m A^2).
double log_asymptote_threshold(const PhysicalSystem& sys, const CosinePotential& pot);

/// sigma^2 = (hbar^2 / 8 m A) ln(32 pi m A^2 t / hbar^2 b), strong-barrier limit.
/// Throws LogDomainError for t <= log_asymptote_threshold.
double log_asymptote_sigma_sq(double t, const PhysicalSystem& sys, const CosinePotential& pot);

/// sigma^2 = hbar sqrt(t / m b), the potential-free overdamped law.
double free_subdiffusion(double t, const PhysicalSystem& sys);

ScaleSet characteristic_scales(const PhysicalSystem& sys, const CosinePotential& pot);

/// Integrates d sigma^2/dt = dispersion_rate(sigma^2) from sigma0_sq at t = 0
/// and returns sigma^2 at the requested (non-decreasing) times. This is the
/// only route that honours a non-zero initial dispersion.
std::vector<double> integrate_dispersion_rate(double sigma0_sq, std::span<const double> times,
                                              const PhysicalSystem& sys,
                                              const CosinePotential& pot, double rel_tol = 1e-10);

}  // namespace qdiff
