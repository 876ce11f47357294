#pragma once

// Dimensionless wave-packet dispersion: the dissipative Ermakov equation
//   xi'' + xi' = xi^-3
// and its harmonically trapped variant (damped Pinney equation)
//   xi'' + xi' + alpha^2 xi = xi^-3,
// with xi^2 = 2 b sigma^2 / hbar and tau = b t / m.

#include <cstddef>
#include <span>
#include <vector>

namespace qdiff {

/// Trajectories are aborted when xi drops below this value.
inline constexpr double kXiFloor = 1e-8;

enum class SampleSpacing { linear, logarithmic };

struct DimensionlessParams {
  double xi0_sq = 0.1;
  /// m omega0 / b; zero selects the free particle.
  double alpha = 0.0;
  double tau_end = 100.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Number of output samples including tau = 0.
  std::size_t samples = 2000;
  SampleSpacing spacing = SampleSpacing::linear;
  /// Extension: d xi / d tau at tau = 0. The physical problem starts at rest.
  double initial_velocity = 0.0;

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

struct TrajectorySample {
  double tau;
  double xi;
  double dxi_dtau;
  /// d^2 xi / d tau^2 from the ODE at the interpolated state.
  double d2xi_dtau2;

  double xi_sq() const { return xi * xi; }
  /// d(xi^2)/d tau
  double rate() const { return 2.0 * xi * dxi_dtau; }
};

/// Immutable, tau-ordered list of samples starting at tau = 0.
class Trajectory {
 public:
  Trajectory() = default;
  /// Throws DomainError unless tau is strictly increasing and xi > 0.
  explicit Trajectory(std::vector<TrajectorySample> samples, double alpha = 0.0);

  std::span<const TrajectorySample> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const TrajectorySample& operator[](std::size_t i) const { return samples_[i]; }
  const TrajectorySample& front() const { return samples_.front(); }
  const TrajectorySample& back() const { return samples_.back(); }
  double alpha() const { return alpha_; }

 private:
  std::vector<TrajectorySample> samples_;
  double alpha_ = 0.0;
};

/// Output times produced for `params` (linear or log-spaced, always from 0).
std::vector<double> output_grid(const DimensionlessParams& params);

/// Integrates the Ermakov / Pinney equation with an adaptive Dormand-Prince
/// 5(4) scheme and samples it with dense output.
/// Throws SingularityError if xi falls below kXiFloor and StiffnessError on
/// step-size underflow.
Trajectory integrate_dispersion(const DimensionlessParams& params);

/// Same as above but samples at caller-supplied times (non-decreasing, >= 0).
Trajectory integrate_dispersion(const DimensionlessParams& params,
                                std::span<const double> taus);

/// Ballistic (vacuum) law xi^2 = xi0^2 + tau^2 / xi0^2.
double short_time_xi_sq(double xi0_sq, double tau);

/// Overdamped law xi^4 = xi0^4 + 4 tau.
double long_time_xi_sq(double xi0_sq, double tau);

/// Particle and environment in SI units.
struct PhysicalSystem {
  double m = 0.0;          // kg
  double b = 0.0;          // kg / s
  double T = 0.0;          // K, zero when unused
  double sigma0_sq = 0.0;  // m^2
  double omega0 = 0.0;     // 1 / s
  double hbar = 0.0;       // J s; zero means constants::hbar
  double k_B = 0.0;        // J / K; zero means constants::boltzmann

  double reduced_planck() const;
  double boltzmann() const;
  void validate() const;
};

/// xi0^2 = 2 b sigma0^2 / hbar, alpha = m omega0 / b. Other fields of
/// `base` (horizon, tolerances, sampling) are carried over.
DimensionlessParams to_dimensionless(const PhysicalSystem& sys,
                                     DimensionlessParams base = {});

struct PhysicalSample {
  double t;         // s
  double sigma_sq;  // m^2
};

std::vector<PhysicalSample> to_physical(const Trajectory& traj, const PhysicalSystem& sys);

double tau_of_time(double t, const PhysicalSystem& sys);
double time_of_tau(double tau, const PhysicalSystem& sys);
double sigma_sq_of_xi_sq(double xi_sq, const PhysicalSystem& sys);
double xi_sq_of_sigma_sq(double sigma_sq, const PhysicalSystem& sys);

/// sigma^2 = sigma0^2 + (hbar t / 2 m sigma0)^2, free spreading in vacuum.
double vacuum_sigma_sq(const PhysicalSystem& sys, double t);

}  // namespace qdiff
