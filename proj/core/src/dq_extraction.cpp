#include "qdiff/dq_extraction.hpp"

#include <cmath>
#include <cstdio>

#include "qdiff/errors.hpp"

namespace qdiff {

RatePoint max_rate(const Trajectory& traj) {
  if (traj.size() < 3) throw HorizonError("max_rate: need at least three samples");
  const auto s = traj.samples();
  std::size_t k = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].rate() > s[k].rate()) k = i;
  }
  if (k == 0 || k + 1 == s.size()) {
    throw HorizonError("max_rate: maximum on the boundary of the sampled range");
  }

  // Vertex of the parabola through (t0,r0), (t1,r1), (t2,r2).
  const double t0 = s[k - 1].tau, t1 = s[k].tau, t2 = s[k + 1].tau;
  const double r0 = s[k - 1].rate(), r1 = s[k].rate(), r2 = s[k + 1].rate();
  const double d01 = (r1 - r0) / (t1 - t0);
  const double d12 = (r2 - r1) / (t2 - t1);
  const double curvature = (d12 - d01) / (t2 - t0);
  RatePoint p{traj.front().xi_sq(), t1, r1};
  if (curvature < 0.0) {
    const double slope_at_t1 = d01 + curvature * (t1 - t0);
    const double shift = -slope_at_t1 / (2.0 * curvature);
    if (std::fabs(shift) <= std::fmax(t1 - t0, t2 - t1)) {
      p.tau_at_max = t1 + shift;
      p.max_rate = r1 + slope_at_t1 * shift + curvature * shift * shift;
    }
  }
  return p;
}

std::vector<RatePoint> fig2_scan(std::span<const double> xi0_sq_list, const ScanOptions& options) {
  std::vector<RatePoint> out;
  out.reserve(xi0_sq_list.size());
  for (const double xi0_sq : xi0_sq_list) {
    DimensionlessParams p;
    p.xi0_sq = xi0_sq;
    p.alpha = 0.0;
    p.samples = options.samples;
    p.rel_tol = options.rel_tol;
    p.abs_tol = options.abs_tol;
    p.tau_end = options.initial_horizon;
    for (int attempt = 0;; ++attempt) {
      try {
        out.push_back(max_rate(integrate_dispersion(p)));
        break;
      } catch (const HorizonError&) {
        if (attempt >= options.max_extensions) throw;
        p.tau_end *= 2.0;
      }
    }
  }
  return out;
}

DqEstimate apparent_dq(const PhysicalSystem& sys) {
  sys.validate();
  const double hbar = sys.reduced_planck();
  DqEstimate est{hbar * hbar / (16.0 * sys.m * sys.b * sys.sigma0_sq), std::nullopt};
  const double xi0_sq = xi_sq_of_sigma_sq(sys.sigma0_sq, sys);
  if (xi0_sq > kDqFitLimit) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "xi0^2 = %.4g exceeds %.2g; the 1/(2 xi0^2) fit underestimates the rate",
                  xi0_sq, kDqFitLimit);
    est.warning = buf;
  }
  return est;
}

DqRatio dq_over_einstein(const PhysicalSystem& sys) {
  sys.validate();
  if (!(sys.T > 0.0)) throw DomainError("dq_over_einstein: temperature must be positive");
  const double hbar = sys.reduced_planck();
  const double kT = sys.boltzmann() * sys.T;
  const double dq = hbar * hbar / (16.0 * sys.m * sys.b * sys.sigma0_sq);
  const double einstein = kT / sys.b;
  const double lambda_t = hbar / (2.0 * std::sqrt(sys.m * kT));
  const double r = lambda_t / (2.0 * std::sqrt(sys.sigma0_sq));
  return {dq / einstein, r * r};
}

}  // namespace qdiff
