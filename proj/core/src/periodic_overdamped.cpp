#include "qdiff/periodic_overdamped.hpp"

#include <cmath>
#include <string>

#include "qdiff/constants.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/ode.hpp"
#include "qdiff/special_functions.hpp"

namespace qdiff {

namespace {

void check_system(const PhysicalSystem& sys) {
  if (!(sys.m > 0.0) || !(sys.b > 0.0)) {
    throw DomainError("overdamped system: mass and friction must be positive");
  }
}

// beta_Q A for a given dispersion
double barrier_ratio(double sigma_sq, const PhysicalSystem& sys, const CosinePotential& pot) {
  const double hbar = sys.reduced_planck();
  return 4.0 * sys.m * sigma_sq * pot.amplitude / (hbar * hbar);
}

// ln(x^2 [I0^2(x) - I1^2(x)]) evaluated without overflow
double log_time_kernel(double x) {
  const double s0 = bessel_i_scaled(0, x);
  const double s1 = bessel_i_scaled(1, x);
  return 2.0 * std::log(x) + 2.0 * x + std::log((s0 - s1) * (s0 + s1));
}

}  // namespace

double CosinePotential::period() const { return 2.0 * constants::pi / wavenumber; }

double CosinePotential::operator()(double x) const { return amplitude * std::cos(wavenumber * x); }

double CosinePotential::derivative(double x) const {
  return -amplitude * wavenumber * std::sin(wavenumber * x);
}

double CosinePotential::second_derivative(double x) const {
  return -wavenumber * wavenumber * (*this)(x);
}

void CosinePotential::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw DomainError("cosine potential: amplitude must be non-negative");
  }
  if (!(wavenumber > 0.0) || !std::isfinite(wavenumber)) {
    throw DomainError("cosine potential: wavenumber must be positive");
  }
}

QuantumTemperatureState QuantumTemperatureState::from_sigma_sq(double sigma_sq,
                                                               const PhysicalSystem& sys) {
  if (!(sigma_sq > 0.0)) throw DomainError("quantum temperature: sigma^2 must be positive");
  const double hbar = sys.reduced_planck();
  return {sigma_sq, hbar * hbar / (4.0 * sys.m * sigma_sq)};
}

double dispersion_rate(double sigma_sq, const PhysicalSystem& sys, const CosinePotential& pot) {
  check_system(sys);
  pot.validate();
  const auto state = QuantumTemperatureState::from_sigma_sq(sigma_sq, sys);
  const double x = state.beta_q() * pot.amplitude;
  const double s0 = bessel_i_scaled(0, x);
  // 2 / (b beta_Q I0^2) with I0 = e^x s0
  return 2.0 * state.beta_q_inv * std::exp(-2.0 * x) / (sys.b * s0 * s0);
}

double time_of_dispersion(double sigma_sq, const PhysicalSystem& sys, const CosinePotential& pot) {
  check_system(sys);
  pot.validate();
  if (!(pot.amplitude > 0.0)) throw DomainError("time_of_dispersion: amplitude must be positive");
  if (!(sigma_sq >= 0.0)) throw DomainError("time_of_dispersion: sigma^2 must be non-negative");
  if (sigma_sq == 0.0) return 0.0;
  const double hbar = sys.reduced_planck();
  const double x = barrier_ratio(sigma_sq, sys, pot);
  const double scale = hbar * hbar * sys.b / (16.0 * sys.m * pot.amplitude * pot.amplitude);
  return scale * std::exp(log_time_kernel(x));
}

double dispersion_of_time(double t, const PhysicalSystem& sys, const CosinePotential& pot) {
  check_system(sys);
  pot.validate();
  if (!(pot.amplitude > 0.0)) throw DomainError("dispersion_of_time: amplitude must be positive");
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("dispersion_of_time: t must be >= 0");
  if (t == 0.0) return 0.0;

  const double hbar = sys.reduced_planck();
  const double log_target = std::log(16.0 * sys.m * pot.amplitude * pot.amplitude * t /
                                     (hbar * hbar * sys.b));
  // Root-find in u = ln x; the kernel behaves like 2u for small x.
  auto g = [log_target](double u) { return log_time_kernel(std::exp(u)) - log_target; };

  // Start at x in [1e-8, 1]; lower the bottom for tiny t, double the top
  // (u += ln 2) until the kernel crosses the target.
  Bracket bracket{std::log(1e-8), 0.0};
  while (g(bracket.lo) > 0.0) {
    bracket.lo -= std::log(1e4);
    if (bracket.lo < -700.0) throw BracketError("dispersion_of_time: t too small to bracket");
  }
  while (g(bracket.hi) < 0.0) {
    bracket.hi += std::log(2.0);
    if (bracket.hi > std::log(1e6)) throw BracketError("dispersion_of_time: t too large");
  }
  const double u = find_root(g, bracket, 1e-13);
  const double x = std::exp(u);
  return hbar * hbar * x / (4.0 * sys.m * pot.amplitude);
}

double log_asymptote_threshold(const PhysicalSystem& sys, const CosinePotential& pot) {
  check_system(sys);
  pot.validate();
  if (!(pot.amplitude > 0.0)) throw DomainError("log asymptote: amplitude must be positive");
  const double hbar = sys.reduced_planck();
  return hbar * hbar * sys.b / (32.0 * constants::pi * sys.m * pot.amplitude * pot.amplitude);
}

double log_asymptote_sigma_sq(double t, const PhysicalSystem& sys, const CosinePotential& pot) {
  const double threshold = log_asymptote_threshold(sys, pot);
  if (!(t > threshold)) {
    throw LogDomainError("log asymptote undefined for t <= " + std::to_string(threshold) + " s",
                         threshold);
  }
  const double hbar = sys.reduced_planck();
  return hbar * hbar / (8.0 * sys.m * pot.amplitude) * std::log(t / threshold);
}

double free_subdiffusion(double t, const PhysicalSystem& sys) {
  check_system(sys);
  if (!(t >= 0.0)) throw DomainError("free_subdiffusion: t must be non-negative");
  return sys.reduced_planck() * std::sqrt(t / (sys.m * sys.b));
}

ScaleSet characteristic_scales(const PhysicalSystem& sys, const CosinePotential& pot) {
  check_system(sys);
  pot.validate();
  if (!(pot.amplitude > 0.0)) throw DomainError("characteristic_scales: amplitude must be > 0");
  const double hbar = sys.reduced_planck();
  const double omega = 4.0 * pot.amplitude / hbar;
  return {hbar / (2.0 * std::sqrt(2.0 * sys.m * pot.amplitude)), omega,
          sys.b / (sys.m * omega * omega)};
}

std::vector<double> integrate_dispersion_rate(double sigma0_sq, std::span<const double> times,
                                              const PhysicalSystem& sys,
                                              const CosinePotential& pot, double rel_tol) {
  check_system(sys);
  pot.validate();
  if (!(sigma0_sq > 0.0)) throw DomainError("integrate_dispersion_rate: sigma0^2 must be > 0");
  // Integrate s = sigma^2 / sigma0^2 over a time unit in which the initial
  // rate is one; keeps the state O(1) regardless of SI magnitudes.
  const double t_unit = sigma0_sq / dispersion_rate(sigma0_sq, sys, pot);
  std::vector<double> scaled_times(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) scaled_times[i] = times[i] / t_unit;

  auto rhs = [&](double, const OdeState<1>& y) -> OdeState<1> {
    const double s = std::fmax(y[0], 1e-300);
    return {dispersion_rate(s * sigma0_sq, sys, pot) * t_unit / sigma0_sq};
  };
  std::vector<double> out;
  out.reserve(times.size());
  auto observe = [&](double, const OdeState<1>& y, const OdeState<1>&) {
    out.push_back(y[0] * sigma0_sq);
  };
  OdeOptions opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = rel_tol * 1e-3;
  integrate_dopri5<1>(rhs, 0.0, {1.0}, scaled_times, opt, observe,
                      [](double, const OdeState<1>&) {});
  return out;
}

}  // namespace qdiff
