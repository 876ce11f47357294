#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "qdiff/cli.hpp"
#include "qdiff/constants.hpp"
#include "qdiff/dq_extraction.hpp"
#include "qdiff/dynamics.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/pde.hpp"
#include "qdiff/periodic_overdamped.hpp"
#include "qdiff/thermo_quantum.hpp"

namespace qdiff::cli {

namespace c = qdiff::constants;

namespace {

double wavenumber(double period_angstrom) {
  if (!(period_angstrom > 0.0)) throw DomainError("lattice period must be positive");
  return 2.0 * c::pi / (period_angstrom * c::angstrom);
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo)) throw DomainError("range must satisfy 0 < min <= max");
  if (n == 0) throw UsageError("need at least one point");
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(n - 1);
    v[i] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

std::string fmt(double v) { return format_real(v); }

}  // namespace

double parse_mass(const std::string& text) {
  if (text == "e") return c::mass::electron;
  if (text == "mu") return c::mass::muon;
  if (text == "H") return c::mass::hydrogen;
  if (text == "D") return c::mass::deuterium;
  if (text == "T") return c::mass::tritium;
  char* end = nullptr;
  const double m = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw UsageError("unknown mass '" + text + "' (use e, mu, H, D, T or a value in kg)");
  }
  if (!(m > 0.0)) throw DomainError("mass must be positive");
  return m;
}

DiffusionReport fig1(const Fig1Options& o) {
  DiffusionReport r;
  r.columns = {"tau", "xi_sq", "dxi_sq_dtau"};
  if (o.tau_end == 0.0) {
    if (!(o.xi0_sq > 0.0)) throw DomainError("xi0_sq must be positive");
    r.add_row({0.0, o.xi0_sq, 0.0});
    return r;
  }
  DimensionlessParams p;
  p.xi0_sq = o.xi0_sq;
  p.tau_end = o.tau_end;
  p.samples = o.samples;
  const auto traj = integrate_dispersion(p);
  for (const auto& s : traj.samples()) r.add_row({s.tau, s.xi_sq(), s.rate()});
  return r;
}

std::vector<double> default_fig2_list(std::size_t points) { return log_space(0.01, 0.5, points); }

DiffusionReport fig2(std::span<const double> xi0_sq_list) {
  if (xi0_sq_list.empty()) throw UsageError("fig2: the xi0^2 list is empty");
  DiffusionReport r;
  r.columns = {"xi0_sq", "tau_at_max", "max_rate", "fit_value"};
  for (const auto& pt : fig2_scan(xi0_sq_list)) {
    r.add_row({pt.xi0_sq, pt.tau_at_max, pt.max_rate, pt.fit_value()});
  }
  return r;
}

DiffusionReport fig3(const Fig3Options& o) {
  DiffusionReport r;
  r.columns = {"tau", "xi_sq"};
  if (o.tau_end == 0.0) {
    if (!(o.xi0_sq > 0.0)) throw DomainError("xi0_sq must be positive");
    r.add_row({0.0, o.xi0_sq});
    return r;
  }
  DimensionlessParams p;
  p.xi0_sq = o.xi0_sq;
  p.alpha = o.alpha;
  p.tau_end = o.tau_end;
  p.samples = o.samples;
  const auto traj = integrate_dispersion(p);
  for (const auto& s : traj.samples()) r.add_row({s.tau, s.xi_sq()});
  return r;
}

DiffusionReport fig4(const Fig4Options& o) {
  const auto& lat = o.lattice;
  if (!(lat.A > 0.0) || !(lat.b > 0.0)) throw DomainError("fig4: A and b must be positive");
  if (o.isotopes.empty()) throw UsageError("fig4: no isotopes given");
  ArrheniusFit fit{2.0 * lat.A, 2.0 * c::pi * lat.A / lat.b, lat.A, lat.b, 0.0, 0.0};
  std::vector<Isotope> isotopes;
  for (const auto& name : o.isotopes) isotopes.push_back({name, parse_mass(name)});
  const auto temperatures = inverse_temperature_grid(o.T_min, o.T_max, o.points);

  DiffusionReport r;
  r.columns = {"isotope", "T", "inv_T", "D_eff_eq19", "D_eff_eq18", "validity_flag"};
  for (const auto& row : isotope_scan(fit, isotopes, wavenumber(lat.period_angstrom), temperatures)) {
    Cell arrhenius;
    if (row.D_eff_arrhenius) arrhenius = *row.D_eff_arrhenius;
    r.add_row({row.isotope, row.T, row.inv_T, arrhenius, row.D_eff_bessel,
               std::string(to_string(row.validity))});
  }
  return r;
}

DiffusionReport sigma_t(const SigmaTOptions& o) {
  PhysicalSystem sys;
  sys.m = parse_mass(o.mass);
  sys.b = o.lattice.b;
  if (!(sys.b > 0.0)) throw DomainError("sigma-t: friction must be positive");
  const CosinePotential pot{o.lattice.A, wavenumber(o.lattice.period_angstrom)};
  pot.validate();
  const double hbar = c::hbar;

  DiffusionReport r;
  r.columns = {"t", "sigma_sq_exact", "sigma_sq_log_asymptote", "sigma_sq_free",
               "roundtrip_rel_residual"};
  const bool flat = pot.amplitude == 0.0;
  const double t_thr = flat ? 0.0 : log_asymptote_threshold(sys, pot);
  for (const double t : log_space(o.t_min, o.t_max, o.points)) {
    const double free = free_subdiffusion(t, sys);
    double exact = free, back = 0.0;
    Cell asymptote;
    if (flat) {
      back = sys.m * sys.b * free * free / (hbar * hbar);
    } else {
      exact = dispersion_of_time(t, sys, pot);
      back = time_of_dispersion(exact, sys, pot);
      if (t > t_thr) asymptote = log_asymptote_sigma_sq(t, sys, pot);
    }
    r.add_row({t, exact, asymptote, free, std::fabs(back - t) / t});
  }
  return r;
}

PdeScenario parse_scenario(const std::string& name) {
  if (name == "eq9_free") return PdeScenario::eq9_free;
  if (name == "eq10_free") return PdeScenario::eq10_free;
  if (name == "eq16_cosine") return PdeScenario::eq16_cosine;
  throw UsageError("unknown scenario '" + name + "' (eq9_free, eq10_free, eq16_cosine)");
}

const char* to_string(PdeScenario s) {
  switch (s) {
    case PdeScenario::eq9_free:
      return "eq9_free";
    case PdeScenario::eq10_free:
      return "eq10_free";
    case PdeScenario::eq16_cosine:
      return "eq16_cosine";
  }
  return "unknown";
}

namespace {

DiffusionReport history_report(const std::vector<Snapshot>& history,
                               const std::function<double(double)>& reference) {
  DiffusionReport r;
  r.columns = {"t", "mean", "sigma_sq", "kurtosis", "mass", "sigma_sq_reference"};
  for (const auto& s : history) {
    r.add_row({s.time, s.moments.mean, s.moments.sigma_sq, s.moments.kurtosis, s.mass,
               reference(s.time)});
  }
  return r;
}

double max_mass_error(const std::vector<Snapshot>& history, double m0) {
  double w = 0.0;
  for (const auto& s : history) w = std::max(w, std::fabs(s.mass - m0) / m0);
  return w;
}

Snapshot initial_snapshot(const DensityField& rho, const Grid1D& grid) {
  return {0.0, measure_moments(rho, grid), total_mass(rho, grid), std::nullopt};
}

constexpr double kSigma4Tolerance = 0.01;
constexpr double kDeffTolerance = 0.05;
constexpr double kMassTolerance = 1e-8;

// hbar = m = b = 1, sigma0 = 1: sigma^4 = 1 + t. Line half-width is 12
// sigma at the default end time.
PdeCheckResult free_check(const PdeCheckOptions& o) {
  PhysicalSystem sys;
  sys.m = sys.b = sys.hbar = 1.0;
  sys.sigma0_sq = 1.0;
  const std::size_t cells = o.resolution ? o.resolution : 256;
  const double t_end = o.t_end >= 0.0 ? o.t_end : 15.0;
  const auto grid = Grid1D::line(24.0, cells);
  const auto rho = gaussian_density(grid, 0.0, 1.0);

  std::vector<Snapshot> history{initial_snapshot(rho, grid)};
  std::size_t steps = 0, widenings = 0;
  if (t_end > 0.0) {
    EvolveOptions e;
    e.t_end = t_end;
    e.snapshots = 30;
    Evolution ev;
    if (o.scenario == PdeScenario::eq9_free) {
      e.dt = 0.5 * stable_time_step_eq9(rho, grid, sys, nullptr);
      ev = evolve_eq9(rho, grid, sys, nullptr, e);
    } else {
      // explicit Euler error is O(dt)
      e.dt = 0.1 * stable_time_step_smoluchowski(grid, 0.25, 1.0, nullptr, FluxScheme::central);
      ev = evolve_eq10(rho, grid, sys, nullptr, e);
    }
    history = ev.history;
    steps = ev.steps;
    widenings = ev.widenings;
  }

  PdeCheckResult res;
  res.history = history_report(history, [](double t) { return std::sqrt(1.0 + t); });
  double dev = 0.0;
  for (const auto& s : history) {
    dev = std::max(dev, std::fabs(s.moments.sigma_sq * s.moments.sigma_sq / (1.0 + s.time) - 1.0));
  }
  const double mass_err = max_mass_error(history, history.front().mass);
  const auto& first = history.front().moments;
  res.summary = {{"scenario", to_string(o.scenario)},
                 {"cells", std::to_string(cells)},
                 {"t_end", fmt(t_end)},
                 {"initial_mean", fmt(first.mean)},
                 {"initial_sigma_sq", fmt(first.sigma_sq)},
                 {"initial_kurtosis", fmt(first.kurtosis)}};
  if (t_end > 0.0) {
    res.summary.insert(res.summary.end(),
                       {{"steps", std::to_string(steps)},
                        {"widenings", std::to_string(widenings)},
                        {"final_sigma_sq", fmt(history.back().moments.sigma_sq)},
                        {"max_rel_dev_sigma4_law", fmt(dev)},
                        {"max_rel_mass_error", fmt(mass_err)}});
  }
  res.passed = dev <= kSigma4Tolerance && mass_err <= kMassTolerance;
  return res;
}

// Hydrogen on Ni(111) at 300 K in the linearised effective potential. The
// line spans enough periods for sqrt(2 D t) to reach 20 periods with the
// packet still 12 sigma from the ends.
PdeCheckResult cosine_check(const PdeCheckOptions& o) {
  const double L = 3.6 * c::angstrom;
  const ThermoSystem sys{c::mass::hydrogen, 3.3e-13, 300.0, 1.67e-20, 2.0 * c::pi / L};
  const auto spec = EffectivePotentialSpec::from_system(sys, EffectiveMode::linearized);
  const double reference = lifson_jackson_deff(spec, sys);
  const std::size_t per_period = o.resolution ? o.resolution : 32;
  const double travel = 20.0 * L, s0 = 4.0 * L * L;
  const double periods = std::ceil(2.0 * 12.0 * std::sqrt(s0 + travel * travel) / L);
  const auto grid = Grid1D::line(0.5 * periods * L, static_cast<std::size_t>(periods) * per_period);
  const auto rho = gaussian_density(grid, 0.0, s0);
  const double t_end = o.t_end >= 0.0 ? o.t_end : travel * travel / (2.0 * reference);

  PdeCheckResult res;
  std::vector<Snapshot> history{initial_snapshot(rho, grid)};
  std::optional<double> measured;
  std::size_t steps = 0, widenings = 0;
  if (t_end > 0.0) {
    EvolveOptions e;
    e.t_end = t_end;
    e.dt = std::min(0.1 * L * L / reference, t_end);
    e.time_scheme = TimeScheme::semi_implicit;
    e.flux = FluxScheme::exponential_fitting;
    const auto ev = evolve_eq16(rho, grid, sys, spec, e);
    history = ev.history;
    steps = ev.steps;
    widenings = ev.widenings;
    measured = measure_effective_diffusivity(ev);
  }
  res.history = history_report(history, [&](double t) { return s0 + 2.0 * reference * t; });
  const double mass_err = max_mass_error(history, history.front().mass);
  const auto& first = history.front().moments;
  res.summary = {{"scenario", to_string(o.scenario)},
                 {"cells_per_period", std::to_string(per_period)},
                 {"cells", std::to_string(grid.size())},
                 {"t_end", fmt(t_end)},
                 {"initial_mean", fmt(first.mean)},
                 {"initial_sigma_sq", fmt(first.sigma_sq)},
                 {"initial_kurtosis", fmt(first.kurtosis)}};
  if (measured) {
    const double rel = std::fabs(*measured / reference - 1.0);
    res.summary.insert(res.summary.end(),
                       {{"steps", std::to_string(steps)},
                        {"widenings", std::to_string(widenings)},
                        {"D_eff_measured", fmt(*measured)},
                        {"D_eff_lifson_jackson", fmt(reference)},
                        {"rel_error", fmt(rel)},
                        {"max_rel_mass_error", fmt(mass_err)}});
    res.passed = rel <= kDeffTolerance && mass_err <= kMassTolerance;
  } else {
    res.passed = mass_err <= kMassTolerance;
  }
  return res;
}

}  // namespace

PdeCheckResult pde_check(const PdeCheckOptions& o) {
  return o.scenario == PdeScenario::eq16_cosine ? cosine_check(o) : free_check(o);
}

DiffusionReport fit(const FitOptions& o) {
  EnergyUnit unit;
  if (o.energy_unit == "kJ/mol") {
    unit = EnergyUnit::kilojoule_per_mol;
  } else if (o.energy_unit == "J/mol") {
    unit = EnergyUnit::joule_per_mol;
  } else if (o.energy_unit == "J") {
    unit = EnergyUnit::joule;
  } else {
    throw UsageError("unknown energy unit '" + o.energy_unit + "' (kJ/mol, J/mol, J)");
  }
  const double m = parse_mass(o.mass);
  const auto f = fit_from_arrhenius({o.activation_energy, unit}, o.D0, m);
  const double q = wavenumber(o.period_angstrom);
  DiffusionReport r;
  r.columns = {"A", "b", "m_over_b", "T_q", "T_free"};
  r.add_row({f.A, f.b, f.relaxation_time, crossover_temperature(m, q),
             free_diffusion_temperature(m, q)});
  return r;
}

}  // namespace qdiff::cli
