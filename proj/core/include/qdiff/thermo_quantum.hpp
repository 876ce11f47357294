#pragma once

// Semiclassical thermo-quantum diffusion in a cosine lattice potential.
//
// Inserting the classical Boltzmann density into the Bohm potential gives
//   Q = lambda_T^2 [U'' - beta U'^2 / 2],
// and integrating over beta yields the effective potential
//   U_eff = [1 - kappa (1 - beta U / 3) / 2] U,   kappa = lambda_T^2 q^2,
// whose Lifson-Jackson diffusivity is D / (<e^{beta U_eff}> <e^{-beta U_eff}>).

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdiff/periodic_overdamped.hpp"

namespace qdiff {

struct ThermoSystem {
  double m = 0.0;  // kg
  double b = 0.0;  // kg / s
  double T = 0.0;  // K
  double A = 0.0;  // J
  double q = 0.0;  // 1 / m

  void validate() const;
  double beta() const;              // 1 / (k_B T)
  double lambda_T() const;          // hbar / (2 sqrt(m k_B T))
  double einstein_D() const;        // k_B T / b
  double tunneling_factor() const;  // lambda_T^2 q^2
  CosinePotential potential() const { return {A, q}; }
};

enum class EffectiveMode { full_cubic, linearized };

struct EffectivePotentialSpec {
  EffectiveMode mode = EffectiveMode::linearized;
  CosinePotential underlying;
  /// lambda_T^2 q^2
  double tq_factor = 0.0;

  static EffectivePotentialSpec from_system(const ThermoSystem& sys, EffectiveMode mode);
};

/// A single period of a potential sampled on a uniform grid x_i = i L / n.
struct SampledPeriodicPotential {
  std::vector<double> values;
  double period = 0.0;

  double spacing() const { return period / static_cast<double>(values.size()); }
};

double thermal_wavelength(double m, double T);

/// Closed form -lambda_T^2 q^2 [U + beta (A^2 - U^2) / 2].
double quantum_potential_boltzmann(const CosinePotential& pot, double x, const ThermoSystem& sys);

/// General form lambda_T^2 [U'' - beta U'^2 / 2] from supplied derivatives.
double quantum_potential_general(double dU, double d2U, const ThermoSystem& sys);

/// General form at sample i with periodic central differences.
/// Throws ResolutionError for fewer than 8 samples per period.
double quantum_potential_boltzmann(const SampledPeriodicPotential& pot, std::size_t i,
                                   const ThermoSystem& sys);

double effective_potential(double x, const EffectivePotentialSpec& spec, const ThermoSystem& sys);

/// Lifson-Jackson diffusivity with period averages by adaptive Gauss-Kronrod
/// quadrature (relative 1e-10). Exponentials are shifted by the extrema so
/// large barriers do not overflow.
double lifson_jackson_deff(const EffectivePotentialSpec& spec, const ThermoSystem& sys);

/// Same for an arbitrary potential with the given period.
double lifson_jackson_deff(const std::function<double(double)>& u_eff, double period,
                           const ThermoSystem& sys);

/// Same for one sampled period (periodic trapezoidal averages).
double lifson_jackson_deff(const SampledPeriodicPotential& u_eff, const ThermoSystem& sys);

/// D / I0^2[beta A (1 - lambda_T^2 q^2 / 2)].
double bessel_deff(const ThermoSystem& sys);

struct ArrheniusEstimate {
  double D_eff;              // m^2 / s
  double activation_energy;  // (2 - kappa) A, J
  double prefactor;          // pi (2 - kappa) A / b, m^2 / s
  /// Set when beta A (1 - kappa/2) < 1, outside the large-argument regime.
  std::optional<std::string> warning;
};

/// Large-barrier (Arrhenius) limit of bessel_deff.
/// Throws SemiclassicalDomainError when lambda_T^2 q^2 >= 2.
ArrheniusEstimate arrhenius_deff(const ThermoSystem& sys);

/// D_eff with lambda_T = 0 at the same temperature: pi 2A/b e^{-2 beta A}.
double classical_arrhenius_deff(const ThermoSystem& sys);

/// T_q = hbar^2 q^2 / (4 m k_B), maximum of beta_eff(T).
double crossover_temperature(double m, double q);

/// Temperature where lambda_T^2 q^2 = 2 and the effective barrier vanishes.
double free_diffusion_temperature(double m, double q);

/// Potential period 2 pi / q implied by an observed crossover temperature.
double period_from_crossover(double m, double T_q);

/// beta (1 - lambda_T^2 q^2 / 2)
double effective_beta(const ThermoSystem& sys);

enum class EnergyUnit { joule, joule_per_mol, kilojoule_per_mol };

struct Energy {
  double value;
  EnergyUnit unit;

  double per_particle() const;
};

struct ArrheniusFit {
  double activation_energy;  // per particle, J
  double D0;                 // m^2 / s
  double A;                  // J
  double b;                  // kg / s
  double m;                  // kg
  double relaxation_time;    // m / b, s
};

/// Inverts the classical Arrhenius parameters: A = E_a / 2, b = 2 pi A / D0.
ArrheniusFit fit_from_arrhenius(Energy activation_energy, double D0, double m);

struct Isotope {
  std::string name;
  double mass;
};

enum class Validity {
  ok,
  /// T < T_q: quantum effects dominate, the semiclassical estimate is rough.
  below_crossover,
  /// beta A (1 - kappa/2) < 1: large-argument Bessel asymptote invalid.
  weak_barrier,
  /// kappa >= 2
  non_semiclassical,
};

const char* to_string(Validity v);

struct IsotopeRow {
  std::string isotope;
  double T;
  double inv_T;
  std::optional<double> D_eff_arrhenius;  // empty when non_semiclassical
  double D_eff_bessel;
  Validity validity;
};

/// Effective diffusivity of each isotope across the temperatures given,
/// ordered isotope-major.
std::vector<IsotopeRow> isotope_scan(const ArrheniusFit& fit, std::span<const Isotope> isotopes,
                                     double q, std::span<const double> temperatures);

/// n temperatures between t_lo and t_hi uniformly spaced in 1/T, ascending.
std::vector<double> inverse_temperature_grid(double t_lo, double t_hi, std::size_t n);

}  // namespace qdiff
