#include <benchmark/benchmark.h>

#include <cmath>

#include "qdiff/constants.hpp"
#include "qdiff/dynamics.hpp"
#include "qdiff/pde.hpp"
#include "qdiff/periodic_overdamped.hpp"
#include "qdiff/special_functions.hpp"
#include "qdiff/thermo_quantum.hpp"

using namespace qdiff;
namespace c = qdiff::constants;

namespace {

const double kQ = 2.0 * c::pi / (3.6 * c::angstrom);

void BM_BesselScaled(benchmark::State& state) {
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bessel_i_scaled(0, x));
}
// series branch, then the asymptotic one
BENCHMARK(BM_BesselScaled)->Arg(1)->Arg(10)->Arg(50)->Arg(500);

void BM_IntegrateDispersion(benchmark::State& state) {
  DimensionlessParams p;
  p.xi0_sq = 0.1;
  p.alpha = static_cast<double>(state.range(0));
  p.tau_end = 100.0;
  p.samples = 2001;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_dispersion(p));
}
BENCHMARK(BM_IntegrateDispersion)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_DispersionOfTime(benchmark::State& state) {
  PhysicalSystem sys;
  sys.m = c::mass::hydrogen;
  sys.b = 3.3e-13;
  const CosinePotential pot{1.67e-20, kQ};
  const double t = log_asymptote_threshold(sys, pot) * std::pow(10.0, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dispersion_of_time(t, sys, pot));
}
BENCHMARK(BM_DispersionOfTime)->Arg(-3)->Arg(0)->Arg(3);

void BM_LifsonJackson(benchmark::State& state) {
  const ThermoSystem sys{c::mass::hydrogen, 3.3e-13, static_cast<double>(state.range(0)), 1.67e-20,
                         kQ};
  const auto spec = EffectivePotentialSpec::from_system(sys, EffectiveMode::linearized);
  for (auto _ : state) benchmark::DoNotOptimize(lifson_jackson_deff(spec, sys));
}
BENCHMARK(BM_LifsonJackson)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMicrosecond);

void BM_BesselDeff(benchmark::State& state) {
  const ThermoSystem sys{c::mass::hydrogen, 3.3e-13, 300.0, 1.67e-20, kQ};
  for (auto _ : state) benchmark::DoNotOptimize(bessel_deff(sys));
}
BENCHMARK(BM_BesselDeff);

// One short run of each PDE per iteration; items = cell updates.
PhysicalSystem unit_system() {
  PhysicalSystem s;
  s.m = s.b = s.hbar = 1.0;
  s.sigma0_sq = 1.0;
  return s;
}

void BM_Eq9Step(benchmark::State& state) {
  const auto sys = unit_system();
  const auto grid = Grid1D::line(24.0, static_cast<std::size_t>(state.range(0)));
  const auto rho = gaussian_density(grid, 0.0, 1.0);
  EvolveOptions o;
  o.dt = 0.5 * stable_time_step_eq9(rho, grid, sys, nullptr);
  o.t_end = 100 * o.dt;
  o.snapshots = 1;
  o.auto_widen = false;
  std::size_t steps = 0;
  for (auto _ : state) steps += evolve_eq9(rho, grid, sys, nullptr, o).steps;
  state.SetItemsProcessed(static_cast<int64_t>(steps) * state.range(0));
}
BENCHMARK(BM_Eq9Step)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_Eq16ImplicitStep(benchmark::State& state) {
  const ThermoSystem sys{c::mass::hydrogen, 3.3e-13, 300.0, 1.67e-20, kQ};
  const auto spec = EffectivePotentialSpec::from_system(sys, EffectiveMode::linearized);
  const double L = 3.6 * c::angstrom;
  const auto grid = Grid1D::line(32.0 * L, static_cast<std::size_t>(64 * state.range(0)));
  const auto rho = gaussian_density(grid, 0.0, 4.0 * L * L);
  const double d = lifson_jackson_deff(spec, sys);
  EvolveOptions o;
  o.dt = 0.1 * L * L / d;
  o.t_end = 100 * o.dt;
  o.snapshots = 1;
  o.auto_widen = false;
  o.time_scheme = TimeScheme::semi_implicit;
  o.flux = FluxScheme::exponential_fitting;
  std::size_t steps = 0;
  for (auto _ : state) steps += evolve_eq16(rho, grid, sys, spec, o).steps;
  state.SetItemsProcessed(static_cast<int64_t>(steps) * 64 * state.range(0));
}
BENCHMARK(BM_Eq16ImplicitStep)->Arg(16)->Arg(32)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
