#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdiff/dynamics.hpp"

namespace qdiff {

/// Largest xi0^2 for which (d xi^2/d tau)_max = 1 / (2 xi0^2) is claimed to hold.
inline constexpr double kDqFitLimit = 0.1;

struct RatePoint {
  double xi0_sq;
  double tau_at_max;
  double max_rate;

  /// 1 / (2 xi0^2)
  double fit_value() const { return 0.5 / xi0_sq; }
};

/// Locates the interior maximum of d(xi^2)/d tau on a trajectory, refined by
/// a parabola through the three samples around the discrete maximum.
/// Throws HorizonError if the maximum sits on either end of the samples.
RatePoint max_rate(const Trajectory& traj);

struct ScanOptions {
  double initial_horizon = 10.0;
  std::size_t samples = 4000;
  double rel_tol = 1e-11;
  double abs_tol = 1e-13;
  int max_extensions = 12;
};

/// One RatePoint per input value; each horizon is doubled until the maximum
/// is interior.
std::vector<RatePoint> fig2_scan(std::span<const double> xi0_sq_list,
                                 const ScanOptions& options = {});

struct DqEstimate {
  double value;  // m^2 / s
  /// Set when the dimensionless xi0^2 exceeds kDqFitLimit.
  std::optional<std::string> warning;
};

/// D_Q = hbar^2 / (16 m b sigma0^2).
DqEstimate apparent_dq(const PhysicalSystem& sys);

struct DqRatio {
  /// D_Q / (k_B T / b)
  double direct;
  /// (lambda_T / 2 sigma0)^2
  double via_wavelength;
};

/// Throws DomainError when T <= 0.
DqRatio dq_over_einstein(const PhysicalSystem& sys);

}  // namespace qdiff
