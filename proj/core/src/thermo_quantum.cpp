#include "qdiff/thermo_quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qdiff/constants.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/special_functions.hpp"

namespace qdiff {

using constants::boltzmann;
using constants::hbar;
using constants::pi;

void ThermoSystem::validate() const {
  if (!(m > 0.0)) throw DomainError("thermo system: mass must be positive");
  if (!(b > 0.0)) throw DomainError("thermo system: friction must be positive");
  if (!(T > 0.0)) throw DomainError("thermo system: temperature must be positive");
  if (!(A >= 0.0)) throw DomainError("thermo system: amplitude must be non-negative");
  if (!(q > 0.0)) throw DomainError("thermo system: wavenumber must be positive");
}

double ThermoSystem::beta() const { return 1.0 / (boltzmann * T); }

double ThermoSystem::lambda_T() const { return thermal_wavelength(m, T); }

double ThermoSystem::einstein_D() const { return boltzmann * T / b; }

double ThermoSystem::tunneling_factor() const {
  const double l = lambda_T();
  return l * l * q * q;
}

EffectivePotentialSpec EffectivePotentialSpec::from_system(const ThermoSystem& sys,
                                                           EffectiveMode mode) {
  sys.validate();
  return {mode, sys.potential(), sys.tunneling_factor()};
}

double thermal_wavelength(double m, double T) {
  if (!(m > 0.0) || !(T > 0.0)) throw DomainError("thermal_wavelength: m and T must be > 0");
  return hbar / (2.0 * std::sqrt(m * boltzmann * T));
}

double quantum_potential_boltzmann(const CosinePotential& pot, double x, const ThermoSystem& sys) {
  const double u = pot(x);
  const double a = pot.amplitude;
  const double l = sys.lambda_T();
  return -l * l * pot.wavenumber * pot.wavenumber * (u + 0.5 * sys.beta() * (a * a - u * u));
}

double quantum_potential_general(double dU, double d2U, const ThermoSystem& sys) {
  const double l = sys.lambda_T();
  return l * l * (d2U - 0.5 * sys.beta() * dU * dU);
}

double quantum_potential_boltzmann(const SampledPeriodicPotential& pot, std::size_t i,
                                   const ThermoSystem& sys) {
  const std::size_t n = pot.values.size();
  if (n < 8) throw ResolutionError("quantum potential: need at least 8 samples per period");
  if (i >= n) throw DomainError("quantum potential: sample index out of range");
  const double h = pot.spacing();
  const double um = pot.values[(i + n - 1) % n];
  const double u0 = pot.values[i];
  const double up = pot.values[(i + 1) % n];
  return quantum_potential_general((up - um) / (2.0 * h), (up - 2.0 * u0 + um) / (h * h), sys);
}

double effective_potential(double x, const EffectivePotentialSpec& spec, const ThermoSystem& sys) {
  const double u = spec.underlying(x);
  if (spec.mode == EffectiveMode::linearized) return (1.0 - 0.5 * spec.tq_factor) * u;
  return (1.0 - 0.5 * spec.tq_factor * (1.0 - sys.beta() * u / 3.0)) * u;
}

namespace {

// Integrates over the phase s = x / period in [0, 1]: the Kronrod error
// estimate misbehaves on intervals of atomic length in metres.
double period_average(const std::function<double(double)>& f, double period) {
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;
  double error = 0.0;
  const double value = Quadrature::integrate([&](double s) { return f(s * period); }, 0.0, 1.0,
                                             15, 1e-12, &error);
  if (!std::isfinite(value) || error > 1e-10 * std::fabs(value)) {
    throw IntegrationError("lifson_jackson_deff: period average did not converge");
  }
  return value;
}

}  // namespace

double lifson_jackson_deff(const std::function<double(double)>& u_eff, double period,
                           const ThermoSystem& sys) {
  sys.validate();
  if (!(period > 0.0)) throw DomainError("lifson_jackson_deff: period must be positive");
  // Locate the extrema on a fine sample; any shift is exact, it only needs
  // to keep the exponentials in range.
  double u_max = -std::numeric_limits<double>::infinity();
  double u_min = std::numeric_limits<double>::infinity();
  constexpr int kProbe = 512;
  for (int i = 0; i < kProbe; ++i) {
    const double u = u_eff(period * i / kProbe);
    u_max = std::max(u_max, u);
    u_min = std::min(u_min, u);
  }
  const double beta = sys.beta();
  const double plus = period_average([&](double x) { return std::exp(beta * (u_eff(x) - u_max)); },
                                     period);
  const double minus = period_average(
      [&](double x) { return std::exp(-beta * (u_eff(x) - u_min)); }, period);
  // <e^{bU}><e^{-bU}> = e^{b (max - min)} * plus * minus
  return sys.einstein_D() * std::exp(-beta * (u_max - u_min)) / (plus * minus);
}

double lifson_jackson_deff(const EffectivePotentialSpec& spec, const ThermoSystem& sys) {
  return lifson_jackson_deff([&](double x) { return effective_potential(x, spec, sys); },
                             spec.underlying.period(), sys);
}

double lifson_jackson_deff(const SampledPeriodicPotential& u_eff, const ThermoSystem& sys) {
  sys.validate();
  if (u_eff.values.size() < 2) throw ResolutionError("lifson_jackson_deff: too few samples");
  const auto [lo, hi] = std::minmax_element(u_eff.values.begin(), u_eff.values.end());
  const double u_min = *lo, u_max = *hi;
  const double beta = sys.beta();
  double plus = 0.0, minus = 0.0;
  for (const double u : u_eff.values) {
    plus += std::exp(beta * (u - u_max));
    minus += std::exp(-beta * (u - u_min));
  }
  const double n = static_cast<double>(u_eff.values.size());
  return sys.einstein_D() * std::exp(-beta * (u_max - u_min)) / ((plus / n) * (minus / n));
}

double bessel_deff(const ThermoSystem& sys) {
  sys.validate();
  const double x = std::fabs(sys.beta() * sys.A * (1.0 - 0.5 * sys.tunneling_factor()));
  const double s0 = bessel_i_scaled(0, x);
  return sys.einstein_D() * std::exp(-2.0 * x) / (s0 * s0);
}

ArrheniusEstimate arrhenius_deff(const ThermoSystem& sys) {
  sys.validate();
  const double kappa = sys.tunneling_factor();
  if (kappa >= 2.0) {
    throw SemiclassicalDomainError(
        "arrhenius_deff: lambda_T^2 q^2 >= 2, the particle is not semiclassical");
  }
  ArrheniusEstimate est;
  est.activation_energy = (2.0 - kappa) * sys.A;
  est.prefactor = pi * (2.0 - kappa) * sys.A / sys.b;
  est.D_eff = est.prefactor * std::exp(-sys.beta() * est.activation_energy);
  if (sys.beta() * sys.A * (1.0 - 0.5 * kappa) < 1.0) {
    est.warning = "beta A (1 - lambda_T^2 q^2 / 2) < 1: Arrhenius limit not reached";
  }
  return est;
}

double classical_arrhenius_deff(const ThermoSystem& sys) {
  sys.validate();
  return 2.0 * pi * sys.A / sys.b * std::exp(-2.0 * sys.beta() * sys.A);
}

double crossover_temperature(double m, double q) {
  if (!(m > 0.0) || !(q > 0.0)) throw DomainError("crossover_temperature: m, q must be > 0");
  return hbar * hbar * q * q / (4.0 * m * boltzmann);
}

double free_diffusion_temperature(double m, double q) { return 0.5 * crossover_temperature(m, q); }

double period_from_crossover(double m, double T_q) {
  if (!(m > 0.0) || !(T_q > 0.0)) throw DomainError("period_from_crossover: m, T_q must be > 0");
  const double q = std::sqrt(4.0 * m * boltzmann * T_q) / hbar;
  return 2.0 * pi / q;
}

double effective_beta(const ThermoSystem& sys) {
  sys.validate();
  return sys.beta() * (1.0 - 0.5 * sys.tunneling_factor());
}

double Energy::per_particle() const {
  switch (unit) {
    case EnergyUnit::joule:
      return value;
    case EnergyUnit::joule_per_mol:
      return value / constants::avogadro;
    case EnergyUnit::kilojoule_per_mol:
      return 1e3 * value / constants::avogadro;
  }
  return value;
}

ArrheniusFit fit_from_arrhenius(Energy activation_energy, double D0, double m) {
  const double ea = activation_energy.per_particle();
  if (!(ea > 0.0) || !(D0 > 0.0) || !(m > 0.0)) {
    throw DomainError("fit_from_arrhenius: inputs must be positive");
  }
  ArrheniusFit fit;
  fit.activation_energy = ea;
  fit.D0 = D0;
  fit.A = 0.5 * ea;
  fit.b = 2.0 * pi * fit.A / D0;
  fit.m = m;
  fit.relaxation_time = m / fit.b;
  return fit;
}

const char* to_string(Validity v) {
  switch (v) {
    case Validity::ok:
      return "ok";
    case Validity::below_crossover:
      return "below_Tq";
    case Validity::weak_barrier:
      return "weak_barrier";
    case Validity::non_semiclassical:
      return "non_semiclassical";
  }
  return "unknown";
}

std::vector<IsotopeRow> isotope_scan(const ArrheniusFit& fit, std::span<const Isotope> isotopes,
                                     double q, std::span<const double> temperatures) {
  std::vector<IsotopeRow> rows;
  rows.reserve(isotopes.size() * temperatures.size());
  for (const auto& iso : isotopes) {
    for (const double T : temperatures) {
      const ThermoSystem sys{iso.mass, fit.b, T, fit.A, q};
      sys.validate();
      IsotopeRow row{iso.name, T, 1.0 / T, std::nullopt, bessel_deff(sys), Validity::ok};
      const double kappa = sys.tunneling_factor();
      if (kappa >= 2.0) {
        row.validity = Validity::non_semiclassical;
      } else {
        row.D_eff_arrhenius = arrhenius_deff(sys).D_eff;
        if (sys.beta() * sys.A * (1.0 - 0.5 * kappa) < 1.0) {
          row.validity = Validity::weak_barrier;
        } else if (T < crossover_temperature(iso.mass, q)) {
          row.validity = Validity::below_crossover;
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<double> inverse_temperature_grid(double t_lo, double t_hi, std::size_t n) {
  if (!(t_lo > 0.0) || !(t_hi >= t_lo) || n == 0) {
    throw DomainError("inverse_temperature_grid: need 0 < t_lo <= t_hi and n >= 1");
  }
  if (n == 1) return {t_lo};
  std::vector<double> ts(n);
  const double a = 1.0 / t_hi, z = 1.0 / t_lo;
  for (std::size_t i = 0; i < n; ++i) {
    // ascending T: start from the largest 1/T
    const double inv = z + (a - z) * static_cast<double>(i) / static_cast<double>(n - 1);
    ts[i] = 1.0 / inv;
  }
  ts.front() = t_lo;
  ts.back() = t_hi;
  return ts;
}

}  // namespace qdiff
