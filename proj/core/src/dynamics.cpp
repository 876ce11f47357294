#include "qdiff/dynamics.hpp"

#include <cmath>
#include <string>

#include "qdiff/constants.hpp"
#include "qdiff/errors.hpp"
#include "qdiff/ode.hpp"

namespace qdiff {

void DimensionlessParams::validate() const {
  if (!(xi0_sq > 0.0) || !std::isfinite(xi0_sq)) throw DomainError("xi0_sq must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be non-negative");
  if (!(tau_end > 0.0) || !std::isfinite(tau_end)) throw DomainError("tau_end must be positive");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("tolerances must be positive");
  if (samples < 2) throw DomainError("at least two output samples are required");
  if (!std::isfinite(initial_velocity)) throw DomainError("initial_velocity must be finite");
}

Trajectory::Trajectory(std::vector<TrajectorySample> samples, double alpha)
    : samples_(std::move(samples)), alpha_(alpha) {
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!(samples_[i].xi > 0.0)) throw DomainError("trajectory: xi must stay positive");
    if (i > 0 && !(samples_[i].tau > samples_[i - 1].tau)) {
      throw DomainError("trajectory: tau must be strictly increasing");
    }
  }
}

std::vector<double> output_grid(const DimensionlessParams& params) {
  params.validate();
  const std::size_t n = params.samples;
  std::vector<double> taus(n);
  if (params.spacing == SampleSpacing::linear) {
    for (std::size_t i = 0; i < n; ++i) {
      taus[i] = params.tau_end * static_cast<double>(i) / static_cast<double>(n - 1);
    }
  } else {
    // tau = 0 followed by n - 1 log-spaced points spanning six decades
    const double lo = std::log(params.tau_end * 1e-6);
    const double hi = std::log(params.tau_end);
    taus[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      const double f = n > 2 ? static_cast<double>(i - 1) / static_cast<double>(n - 2) : 1.0;
      taus[i] = std::exp(lo + f * (hi - lo));
    }
    taus.back() = params.tau_end;
  }
  return taus;
}

Trajectory integrate_dispersion(const DimensionlessParams& params) {
  const auto taus = output_grid(params);
  return integrate_dispersion(params, taus);
}

Trajectory integrate_dispersion(const DimensionlessParams& params, std::span<const double> taus) {
  params.validate();
  const double alpha_sq = params.alpha * params.alpha;
  auto rhs = [alpha_sq](double, const OdeState<2>& y) -> OdeState<2> {
    const double xi = y[0];
    return {y[1], -y[1] - alpha_sq * xi + 1.0 / (xi * xi * xi)};
  };

  std::vector<TrajectorySample> out;
  out.reserve(taus.size());
  // acceleration re-evaluated from the interpolated state; the interpolant's
  // own derivative is one order less accurate
  auto observe = [&out, &rhs](double tau, const OdeState<2>& y, const OdeState<2>&) {
    out.push_back({tau, y[0], y[1], rhs(tau, y)[1]});
  };
  auto check = [](double tau, const OdeState<2>& y) {
    if (!(y[0] >= kXiFloor)) {
      throw SingularityError("integrate_dispersion: xi fell below floor at tau = " +
                             std::to_string(tau));
    }
  };

  OdeOptions opt;
  opt.rel_tol = params.rel_tol;
  opt.abs_tol = params.abs_tol;
  integrate_dopri5<2>(rhs, 0.0, {std::sqrt(params.xi0_sq), params.initial_velocity}, taus, opt,
                      observe, check);
  return Trajectory(std::move(out), params.alpha);
}

double short_time_xi_sq(double xi0_sq, double tau) {
  return xi0_sq + tau * tau / xi0_sq;
}

double long_time_xi_sq(double xi0_sq, double tau) {
  return std::sqrt(xi0_sq * xi0_sq + 4.0 * tau);
}

double PhysicalSystem::reduced_planck() const { return hbar > 0.0 ? hbar : constants::hbar; }

double PhysicalSystem::boltzmann() const { return k_B > 0.0 ? k_B : constants::boltzmann; }

void PhysicalSystem::validate() const {
  if (!(m > 0.0)) throw DomainError("physical system: mass must be positive");
  if (!(b > 0.0)) throw DomainError("physical system: friction must be positive");
  if (!(sigma0_sq > 0.0)) throw DomainError("physical system: sigma0^2 must be positive");
  if (!(omega0 >= 0.0)) throw DomainError("physical system: omega0 must be non-negative");
  if (!(T >= 0.0)) throw DomainError("physical system: temperature must be non-negative");
}

DimensionlessParams to_dimensionless(const PhysicalSystem& sys, DimensionlessParams base) {
  sys.validate();
  base.xi0_sq = xi_sq_of_sigma_sq(sys.sigma0_sq, sys);
  base.alpha = sys.m * sys.omega0 / sys.b;
  return base;
}

std::vector<PhysicalSample> to_physical(const Trajectory& traj, const PhysicalSystem& sys) {
  std::vector<PhysicalSample> out;
  out.reserve(traj.size());
  for (const auto& s : traj.samples()) {
    out.push_back({time_of_tau(s.tau, sys), sigma_sq_of_xi_sq(s.xi_sq(), sys)});
  }
  return out;
}

double tau_of_time(double t, const PhysicalSystem& sys) { return sys.b * t / sys.m; }

double time_of_tau(double tau, const PhysicalSystem& sys) { return sys.m * tau / sys.b; }

double sigma_sq_of_xi_sq(double xi_sq, const PhysicalSystem& sys) {
  return sys.reduced_planck() * xi_sq / (2.0 * sys.b);
}

double xi_sq_of_sigma_sq(double sigma_sq, const PhysicalSystem& sys) {
  return 2.0 * sys.b * sigma_sq / sys.reduced_planck();
}

double vacuum_sigma_sq(const PhysicalSystem& sys, double t) {
  sys.validate();
  if (!(t >= 0.0)) throw DomainError("vacuum_sigma_sq: t must be non-negative");
  const double spread = sys.reduced_planck() * t / (2.0 * sys.m);
  return sys.sigma0_sq + spread * spread / sys.sigma0_sq;
}

}  // namespace qdiff
