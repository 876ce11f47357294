#pragma once

// 1D finite-volume verification of the overdamped density equations:
//   quantum diffusion      d rho/dt = d/dx [rho d(U + Q)/dx] / b
//   Gaussian closure       d rho/dt = d/dx [rho dU/dx + theta(t) d rho/dx] / b,
//                          theta = hbar^2 / (4 m sigma^2(t))
//   semiclassical          d rho/dt = d/dx [rho dU_eff/dx + k_B T d rho/dx] / b
// All schemes update cell averages through face fluxes, so mass is conserved
// to round-off.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "qdiff/dynamics.hpp"
#include "qdiff/thermo_quantum.hpp"

namespace qdiff {

/// Cells are flushed up to this value before logarithms are taken.
inline constexpr double kDensityFloor = 1e-300;
/// Truncated-line runs widen the domain once an edge cell exceeds this
/// fraction of the peak.
inline constexpr double kBoundaryLeak = 1e-10;
/// Cells below this fraction of the peak do not feel a negative quantum
/// pressure (convex ln rho in under-resolved tails).
inline constexpr double kTailCutoff = 1e-30;

class Grid1D {
 public:
  Grid1D() = default;

  /// Cells [i dx, (i+1) dx) on [0, length), represented by their left node.
  static Grid1D periodic(double length, std::size_t n_cells);
  /// Cell centres on [-half_width, half_width], zero-flux ends.
  static Grid1D line(double half_width, std::size_t n_cells);

  bool is_periodic() const { return periodic_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  double length() const { return dx_ * static_cast<double>(n_); }
  double x(std::size_t i) const { return origin_ + dx_ * static_cast<double>(i); }

 private:
  Grid1D(bool periodic, std::size_t n, double dx, double origin)
      : periodic_(periodic), n_(n), dx_(dx), origin_(origin) {}

  bool periodic_ = false;
  std::size_t n_ = 0;
  double dx_ = 0.0;
  double origin_ = 0.0;
};

inline constexpr std::size_t kMinCells = 64;

struct DensityField {
  std::vector<double> rho;  // 1/m
  double time = 0.0;        // s
};

struct Moments {
  double mean;
  double sigma_sq;
  double kurtosis;
};

double total_mass(const DensityField& field, const Grid1D& grid);
Moments measure_moments(const DensityField& field, const Grid1D& grid);

/// Normalised sampled Gaussian.
DensityField gaussian_density(const Grid1D& grid, double mean, double sigma_sq);
/// Normalised Boltzmann density exp(-U / theta).
DensityField equilibrium_density(const Grid1D& grid, const std::function<double(double)>& U,
                                 double theta);

using PotentialFn = std::function<double(double)>;

enum class FluxScheme {
  /// Arithmetic face average of rho in the drift flux.
  central,
  /// Exponentially fitted (Scharfetter-Gummel / Chang-Cooper type) weights;
  /// exact discrete Boltzmann equilibrium.
  exponential_fitting,
};

enum class TimeScheme {
  explicit_euler,
  /// Backward Euler on the linear drift-diffusion operator with the
  /// temperature frozen over the step.
  semi_implicit,
};

struct EvolveOptions {
  double t_end = 0.0;
  double dt = 0.0;
  /// Snapshots at evenly spaced times after t = 0 (t = 0 is always recorded).
  std::size_t snapshots = 100;
  FluxScheme flux = FluxScheme::central;
  TimeScheme time_scheme = TimeScheme::explicit_euler;
  int max_halvings = 20;
  bool keep_fields = false;
  bool auto_widen = true;
};

struct Snapshot {
  double time;
  Moments moments;
  double mass;
  std::optional<DensityField> field;
};

struct Evolution {
  Grid1D grid;
  DensityField final_field;
  std::vector<Snapshot> history;
  std::size_t steps = 0;
  std::size_t widenings = 0;
};

/// Half the explicit-Euler limit of the linearised quantum diffusion update;
/// the Bohm pressure makes it fourth order, so the step scales with dx^4.
double stable_time_step_eq9(const DensityField& field, const Grid1D& grid,
                            const PhysicalSystem& sys, const PotentialFn& U);

/// Same for the linear drift-diffusion operator at temperature theta.
double stable_time_step_smoluchowski(const Grid1D& grid, double theta, double b,
                                     const PotentialFn& U, FluxScheme flux);

/// Nonlinear quantum diffusion with the Bohm potential; explicit only.
/// options.dt must respect the bound of rho0 (StabilityError otherwise);
/// later steps are sub-cycled if the bound tightens.
Evolution evolve_eq9(const DensityField& rho0, const Grid1D& grid, const PhysicalSystem& sys,
                     const PotentialFn& U, const EvolveOptions& options);

/// Gaussian-closure Smoluchowski equation (truncated line only).
Evolution evolve_eq10(const DensityField& rho0, const Grid1D& grid, const PhysicalSystem& sys,
                      const PotentialFn& U, const EvolveOptions& options);

/// Semiclassical Smoluchowski equation with U_eff at temperature sys.T.
Evolution evolve_eq16(const DensityField& rho0, const Grid1D& grid, const ThermoSystem& sys,
                      const EffectivePotentialSpec& spec, const EvolveOptions& options);

/// Half the least-squares slope of sigma^2(t) over the last `fraction` of
/// the run.
double measure_effective_diffusivity(const Evolution& evolution, double fraction = 0.5);

}  // namespace qdiff
