#include "qdiff/pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdiff/errors.hpp"

namespace qdiff {

Grid1D Grid1D::periodic(double length, std::size_t n_cells) {
  if (!(length > 0.0)) throw DomainError("grid: length must be positive");
  if (n_cells < kMinCells) throw ResolutionError("grid: at least 64 cells are required");
  return Grid1D(true, n_cells, length / static_cast<double>(n_cells), 0.0);
}

Grid1D Grid1D::line(double half_width, std::size_t n_cells) {
  if (!(half_width > 0.0)) throw DomainError("grid: half width must be positive");
  if (n_cells < kMinCells) throw ResolutionError("grid: at least 64 cells are required");
  const double dx = 2.0 * half_width / static_cast<double>(n_cells);
  return Grid1D(false, n_cells, dx, -half_width + 0.5 * dx);
}

double total_mass(const DensityField& field, const Grid1D& grid) {
  double s = 0.0;
  for (const double r : field.rho) s += r;
  return s * grid.dx();
}

Moments measure_moments(const DensityField& field, const Grid1D& grid) {
  const std::size_t n = grid.size();
  double m0 = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m0 += field.rho[i];
    m1 += field.rho[i] * grid.x(i);
  }
  const double mean = m1 / m0;
  double c2 = 0.0, c4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = grid.x(i) - mean;
    const double d2 = d * d;
    c2 += field.rho[i] * d2;
    c4 += field.rho[i] * d2 * d2;
  }
  c2 /= m0;
  c4 /= m0;
  return {mean, c2, c4 / (c2 * c2)};
}

namespace {

void normalize(DensityField& field, const Grid1D& grid) {
  const double mass = total_mass(field, grid);
  for (double& r : field.rho) r /= mass;
}

std::vector<double> sample(const Grid1D& grid, const PotentialFn& U) {
  std::vector<double> u(grid.size(), 0.0);
  if (U) {
    for (std::size_t i = 0; i < grid.size(); ++i) u[i] = U(grid.x(i));
  }
  return u;
}

}  // namespace

DensityField gaussian_density(const Grid1D& grid, double mean, double sigma_sq) {
  if (!(sigma_sq > 0.0)) throw DomainError("gaussian_density: sigma^2 must be positive");
  DensityField f{std::vector<double>(grid.size()), 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.x(i) - mean;
    f.rho[i] = std::max(std::exp(-0.5 * d * d / sigma_sq), kDensityFloor);
  }
  normalize(f, grid);
  return f;
}

DensityField equilibrium_density(const Grid1D& grid, const PotentialFn& U, double theta) {
  if (!(theta > 0.0)) throw DomainError("equilibrium_density: temperature must be positive");
  const auto u = sample(grid, U);
  const double u_min = *std::min_element(u.begin(), u.end());
  DensityField f{std::vector<double>(grid.size()), 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f.rho[i] = std::max(std::exp(-(u[i] - u_min) / theta), kDensityFloor);
  }
  normalize(f, grid);
  return f;
}

namespace {

// Face f sits between cells f and f+1 (mod n on periodic grids).
std::size_t face_count(const Grid1D& grid) {
  return grid.is_periodic() ? grid.size() : grid.size() - 1;
}

double bernoulli(double z) {
  if (std::fabs(z) < 1e-8) return 1.0 - 0.5 * z;
  return z / std::expm1(z);
}

// Linear drift-diffusion flux J_f = alpha_f rho_i - gamma_f rho_{i+1}.
struct FaceCoefficients {
  std::vector<double> alpha;
  std::vector<double> gamma;
};

FaceCoefficients smoluchowski_faces(const Grid1D& grid, const std::vector<double>& u,
                                    double theta, double b, FluxScheme flux) {
  const std::size_t n = grid.size();
  const std::size_t nf = face_count(grid);
  const double dx = grid.dx();
  const double diff = theta / (b * dx);
  FaceCoefficients c{std::vector<double>(nf), std::vector<double>(nf)};
  for (std::size_t f = 0; f < nf; ++f) {
    const double du = u[(f + 1) % n] - u[f];
    if (flux == FluxScheme::central) {
      c.alpha[f] = diff - 0.5 * du / (b * dx);
      c.gamma[f] = diff + 0.5 * du / (b * dx);
    } else {
      const double z = du / theta;
      c.alpha[f] = diff * bernoulli(z);
      c.gamma[f] = diff * bernoulli(-z);
    }
  }
  return c;
}

void apply_explicit(const Grid1D& grid, const FaceCoefficients& c, const std::vector<double>& rho,
                    double h, std::vector<double>& out) {
  const std::size_t n = grid.size();
  const std::size_t nf = face_count(grid);
  const double r = h / grid.dx();
  out = rho;
  for (std::size_t f = 0; f < nf; ++f) {
    const std::size_t i = f, j = (f + 1) % n;
    const double flow = r * (c.alpha[f] * rho[i] - c.gamma[f] * rho[j]);
    out[i] -= flow;
    out[j] += flow;
  }
}

// Thomas algorithm; a: sub-diagonal (a[0] unused), c: super-diagonal.
void solve_tridiagonal(std::vector<double> a, std::vector<double> d, std::vector<double> c,
                       std::vector<double>& rhs) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / d[i - 1];
    d[i] -= w * c[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - c[i] * rhs[i + 1]) / d[i];
}

// Cyclic system with corner entries top_right (row 0, col n-1) and
// bottom_left (row n-1, col 0), by Sherman-Morrison.
void solve_cyclic(std::vector<double> a, std::vector<double> d, std::vector<double> c,
                  double top_right, double bottom_left, std::vector<double>& rhs) {
  const std::size_t n = d.size();
  const double gamma = -d[0];
  d[0] -= gamma;
  d[n - 1] -= bottom_left * top_right / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = bottom_left;
  solve_tridiagonal(a, d, c, rhs);
  solve_tridiagonal(a, d, c, u);
  const double fact = (rhs[0] + top_right * rhs[n - 1] / gamma) /
                      (1.0 + u[0] + top_right * u[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) rhs[i] -= fact * u[i];
}

void apply_implicit(const Grid1D& grid, const FaceCoefficients& c, const std::vector<double>& rho,
                    double h, std::vector<double>& out) {
  const std::size_t n = grid.size();
  const std::size_t nf = face_count(grid);
  const double r = h / grid.dx();
  // (I - h L) rho_new = rho
  std::vector<double> lower(n, 0.0), diag(n, 1.0), upper(n, 0.0);
  double top_right = 0.0, bottom_left = 0.0;
  for (std::size_t f = 0; f < nf; ++f) {
    const std::size_t i = f, j = (f + 1) % n;
    diag[i] += r * c.alpha[f];
    diag[j] += r * c.gamma[f];
    if (j == i + 1) {
      upper[i] = -r * c.gamma[f];
      lower[j] = -r * c.alpha[f];
    } else {
      top_right = -r * c.alpha[f];    // row 0 receives alpha_f rho_{n-1}
      bottom_left = -r * c.gamma[f];  // row n-1 receives gamma_f rho_0
    }
  }
  out = rho;
  if (grid.is_periodic()) {
    solve_cyclic(lower, diag, upper, top_right, bottom_left, out);
  } else {
    solve_tridiagonal(lower, diag, upper, out);
  }
}

bool has_negative(const std::vector<double>& v) {
  return std::any_of(v.begin(), v.end(), [](double x) { return !(x >= 0.0); });
}

double edge_ratio(const DensityField& field) {
  const double peak = *std::max_element(field.rho.begin(), field.rho.end());
  return std::max(field.rho.front(), field.rho.back()) / peak;
}

// Doubles the half width at fixed dx, filling new cells by extrapolating
// ln rho quadratically from the three outermost cells.
void widen(Grid1D& grid, DensityField& field) {
  const std::size_t n = grid.size();
  const std::size_t pad = n / 2;
  const double half_width = 0.5 * grid.length() + static_cast<double>(pad) * grid.dx();
  Grid1D wider = Grid1D::line(half_width, n + 2 * pad);
  std::vector<double> rho(n + 2 * pad, kDensityFloor);
  std::copy(field.rho.begin(), field.rho.end(), rho.begin() + static_cast<std::ptrdiff_t>(pad));

  auto extrapolate = [&](double l0, double l1, double l2, std::size_t k) {
    // l(s) through s = 0, -1, -2 (l0 at the edge), evaluated at s = k
    const double s = static_cast<double>(k);
    double slope = l0 - l1;
    double curv = l0 - 2.0 * l1 + l2;
    if (slope > 0.0) slope = 0.0;  // never increase outward
    if (curv > 0.0) curv = 0.0;
    const double l = l0 + slope * s + 0.5 * curv * s * (s + 1.0);
    return std::max(std::exp(l), kDensityFloor);
  };
  auto lg = [](double v) { return std::log(std::max(v, kDensityFloor)); };
  const double r0 = lg(field.rho[n - 1]), r1 = lg(field.rho[n - 2]), r2 = lg(field.rho[n - 3]);
  const double q0 = lg(field.rho[0]), q1 = lg(field.rho[1]), q2 = lg(field.rho[2]);
  for (std::size_t k = 1; k <= pad; ++k) {
    rho[pad + n - 1 + k] = extrapolate(r0, r1, r2, k);
    rho[pad - k] = extrapolate(q0, q1, q2, k);
  }
  const double old_mass = total_mass(field, grid);
  grid = wider;
  field.rho = std::move(rho);
  const double new_mass = total_mass(field, grid);
  for (double& v : field.rho) v *= old_mass / new_mass;
}

// One explicit or implicit step of size h producing `out`; returns false if
// the result has a negative cell.
using StepFn = std::function<bool(const Grid1D&, const std::vector<double>&, double,
                                  std::vector<double>&)>;

Evolution run(const DensityField& rho0, Grid1D grid, const EvolveOptions& opt, const StepFn& step,
              const char* name) {
  if (rho0.rho.size() != grid.size()) {
    throw DomainError(std::string(name) + ": density and grid sizes differ");
  }
  if (!(opt.t_end >= 0.0)) throw DomainError(std::string(name) + ": t_end must be >= 0");
  if (opt.t_end > 0.0 && !(opt.dt > 0.0)) {
    throw DomainError(std::string(name) + ": dt must be positive");
  }
  Evolution ev{grid, rho0, {}, 0, 0};
  ev.final_field.time = 0.0;
  for (double& r : ev.final_field.rho) r = std::max(r, kDensityFloor);

  auto record = [&](double t) {
    Snapshot s{t, measure_moments(ev.final_field, ev.grid), total_mass(ev.final_field, ev.grid),
               std::nullopt};
    if (opt.keep_fields) s.field = ev.final_field;
    ev.history.push_back(std::move(s));
  };
  record(0.0);
  if (opt.t_end == 0.0) return ev;

  const std::size_t n_snap = std::max<std::size_t>(opt.snapshots, 1);
  std::size_t next_snap = 1;
  auto snap_time = [&](std::size_t k) {
    return k == n_snap ? opt.t_end : opt.t_end * static_cast<double>(k) / static_cast<double>(n_snap);
  };

  std::vector<double> next;
  double t = 0.0;
  while (next_snap <= n_snap) {
    const double target = snap_time(next_snap);
    const double h = std::min(opt.dt, target - t);
    // advance by h, halving on positivity failure
    double done = 0.0;
    double sub = h;
    int halvings = 0;
    while (done < h) {
      sub = std::min(sub, h - done);
      if (step(ev.grid, ev.final_field.rho, sub, next)) {
        ev.final_field.rho.swap(next);
        for (double& r : ev.final_field.rho) r = std::max(r, kDensityFloor);
        done += sub;
        ++ev.steps;
      } else {
        if (++halvings > opt.max_halvings) {
          throw StabilityError(std::string(name) + ": negative density persists after " +
                               std::to_string(opt.max_halvings) + " step halvings");
        }
        sub *= 0.5;
      }
    }
    t = (h == target - t) ? target : t + h;
    ev.final_field.time = t;

    if (!ev.grid.is_periodic() && opt.auto_widen && edge_ratio(ev.final_field) > kBoundaryLeak) {
      widen(ev.grid, ev.final_field);
      ++ev.widenings;
    }
    if (t >= target) {
      record(t);
      ++next_snap;
    }
  }
  return ev;
}

}  // namespace

double stable_time_step_eq9(const DensityField& field, const Grid1D& grid,
                            const PhysicalSystem& sys, const PotentialFn& U) {
  const std::size_t n = grid.size();
  const double dx = grid.dx();
  const double hbar = sys.reduced_planck();
  const double c = hbar * hbar / (4.0 * sys.m);
  const auto u = sample(grid, U);
  std::vector<double> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = std::log(std::max(field.rho[i], kDensityFloor));
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool edge = !grid.is_periodic() && (i == 0 || i + 1 == n);
    const std::size_t im = (i + n - 1) % n, ip = (i + 1) % n;
    const double k = edge ? 0.0 : (l[ip] - 2.0 * l[i] + l[im]) / (dx * dx);
    const double drift = edge ? 0.0 : 0.5 * std::fabs(u[ip] - 2.0 * u[i] + u[im]);
    // linearised, the pressure term is fourth order: a sawtooth mode decays
    // at (4c / b dx^2)(4 / dx^2 + |k|)
    worst = std::max(worst, 2.0 * c * (4.0 / (dx * dx) + std::fabs(k)) + drift);
  }
  return worst > 0.0 ? sys.b * dx * dx / worst : std::numeric_limits<double>::infinity();
}

double stable_time_step_smoluchowski(const Grid1D& grid, double theta, double b,
                                     const PotentialFn& U, FluxScheme flux) {
  const auto u = sample(grid, U);
  const auto c = smoluchowski_faces(grid, u, theta, b, flux);
  const std::size_t n = grid.size();
  std::vector<double> out_rate(n, 0.0);
  for (std::size_t f = 0; f < c.alpha.size(); ++f) {
    out_rate[f] += c.alpha[f];
    out_rate[(f + 1) % n] += c.gamma[f];
  }
  const double worst = *std::max_element(out_rate.begin(), out_rate.end());
  return grid.dx() / worst;
}

Evolution evolve_eq9(const DensityField& rho0, const Grid1D& grid, const PhysicalSystem& sys,
                     const PotentialFn& U, const EvolveOptions& options) {
  if (!(sys.m > 0.0) || !(sys.b > 0.0)) throw DomainError("evolve_eq9: invalid system");
  if (options.time_scheme != TimeScheme::explicit_euler) {
    throw DomainError("evolve_eq9: only explicit time stepping is available");
  }
  const double hbar = sys.reduced_planck();
  const double c = hbar * hbar / (4.0 * sys.m);
  std::vector<double> u, l, k, p;
  std::size_t sampled_for = 0;

  // one explicit update of size h
  auto update = [&](const Grid1D& g, const std::vector<double>& rho, double h,
                    std::vector<double>& out) {
    const std::size_t n = g.size();
    const double dx = g.dx();
    l.resize(n);
    k.resize(n);
    p.resize(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = std::log(std::max(rho[i], kDensityFloor));
    for (std::size_t i = 0; i < n; ++i) {
      if (!g.is_periodic() && (i == 0 || i + 1 == n)) continue;
      k[i] = (l[(i + 1) % n] - 2.0 * l[i] + l[(i + n - 1) % n]) / (dx * dx);
    }
    if (!g.is_periodic()) {
      k[0] = k[1];
      k[n - 1] = k[n - 2];
    }
    // quantum pressure -(hbar^2 / 4m) rho (ln rho)''; in negligible tail
    // cells a convex ln rho would act as anti-diffusion, so it is clipped
    const double tail = kTailCutoff * *std::max_element(rho.begin(), rho.end());
    for (std::size_t i = 0; i < n; ++i) {
      const double kk = rho[i] < tail ? std::min(k[i], 0.0) : k[i];
      p[i] = -c * rho[i] * kk;
    }

    out = rho;
    const std::size_t nf = face_count(g);
    const double r = h / dx;
    for (std::size_t f = 0; f < nf; ++f) {
      const std::size_t i = f, j = (f + 1) % n;
      const double flux =
          -((p[j] - p[i]) + 0.5 * (rho[i] + rho[j]) * (u[j] - u[i])) / (sys.b * dx);
      out[i] -= r * flux;
      out[j] += r * flux;
    }
  };

  if (options.t_end > 0.0 && rho0.rho.size() == grid.size()) {
    DensityField floored = rho0;
    for (double& r : floored.rho) r = std::max(r, kDensityFloor);
    const double bound = stable_time_step_eq9(floored, grid, sys, U);
    if (options.dt > bound * (1.0 + 1e-12)) {
      throw StabilityError("evolve_eq9: dt = " + std::to_string(options.dt) +
                           " exceeds the explicit stability bound " + std::to_string(bound));
    }
  }

  // Far-tail roughness can tighten the bound during a run; steps are then
  // sub-cycled rather than rejected.
  std::vector<double> work;
  StepFn step = [&](const Grid1D& g, const std::vector<double>& rho, double h,
                    std::vector<double>& out) {
    if (sampled_for != g.size()) {
      u = sample(g, U);
      sampled_for = g.size();
    }
    work = rho;
    double done = 0.0;
    while (done < h) {
      const double bound = stable_time_step_eq9({work, 0.0}, g, sys, U);
      const double sub = std::min(h - done, bound);
      update(g, work, sub, out);
      if (has_negative(out)) return false;
      for (double& r : out) r = std::max(r, kDensityFloor);
      work.swap(out);
      done = (sub == h - done) ? h : done + sub;
    }
    out.swap(work);
    return true;
  };
  return run(rho0, grid, options, step, "evolve_eq9");
}

Evolution evolve_eq10(const DensityField& rho0, const Grid1D& grid, const PhysicalSystem& sys,
                      const PotentialFn& U, const EvolveOptions& options) {
  if (grid.is_periodic()) {
    throw DomainError("evolve_eq10: the Gaussian closure needs a truncated-line grid");
  }
  if (!(sys.m > 0.0) || !(sys.b > 0.0)) throw DomainError("evolve_eq10: invalid system");
  const double hbar = sys.reduced_planck();
  std::vector<double> u;
  std::size_t sampled_for = 0;

  StepFn step = [&](const Grid1D& g, const std::vector<double>& rho, double h,
                    std::vector<double>& out) {
    if (sampled_for != g.size()) {
      u = sample(g, U);
      sampled_for = g.size();
    }
    // closure: 1/beta_Q from the current dispersion
    const double sigma_sq = measure_moments({rho, 0.0}, g).sigma_sq;
    const double theta = hbar * hbar / (4.0 * sys.m * sigma_sq);
    const auto c = smoluchowski_faces(g, u, theta, sys.b, options.flux);
    if (options.time_scheme == TimeScheme::explicit_euler) {
      const double bound = stable_time_step_smoluchowski(g, theta, sys.b, U, options.flux);
      if (h > bound * (1.0 + 1e-12)) {
        throw StabilityError("evolve_eq10: dt exceeds the explicit stability bound " +
                             std::to_string(bound));
      }
      apply_explicit(g, c, rho, h, out);
    } else {
      apply_implicit(g, c, rho, h, out);
    }
    return !has_negative(out);
  };
  return run(rho0, grid, options, step, "evolve_eq10");
}

Evolution evolve_eq16(const DensityField& rho0, const Grid1D& grid, const ThermoSystem& sys,
                      const EffectivePotentialSpec& spec, const EvolveOptions& options) {
  sys.validate();
  const double theta = 1.0 / sys.beta();
  const PotentialFn U = [&spec, &sys](double x) { return effective_potential(x, spec, sys); };
  FaceCoefficients c;
  std::size_t built_for = 0;

  StepFn step = [&](const Grid1D& g, const std::vector<double>& rho, double h,
                    std::vector<double>& out) {
    if (built_for != g.size()) {
      c = smoluchowski_faces(g, sample(g, U), theta, sys.b, options.flux);
      built_for = g.size();
      if (options.time_scheme == TimeScheme::explicit_euler) {
        const double bound = stable_time_step_smoluchowski(g, theta, sys.b, U, options.flux);
        if (options.dt > bound * (1.0 + 1e-12)) {
          throw StabilityError("evolve_eq16: dt exceeds the explicit stability bound " +
                               std::to_string(bound));
        }
      }
    }
    if (options.time_scheme == TimeScheme::explicit_euler) {
      apply_explicit(g, c, rho, h, out);
    } else {
      apply_implicit(g, c, rho, h, out);
    }
    return !has_negative(out);
  };
  return run(rho0, grid, options, step, "evolve_eq16");
}

double measure_effective_diffusivity(const Evolution& evolution, double fraction) {
  if (evolution.history.size() < 3) {
    throw ResolutionError("measure_effective_diffusivity: need at least three snapshots");
  }
  const double t_end = evolution.history.back().time;
  const double t_start = (1.0 - fraction) * t_end;
  double n = 0, st = 0, ss = 0, stt = 0, sts = 0;
  for (const auto& s : evolution.history) {
    if (s.time < t_start) continue;
    n += 1;
    st += s.time;
    ss += s.moments.sigma_sq;
    stt += s.time * s.time;
    sts += s.time * s.moments.sigma_sq;
  }
  if (n < 2) throw ResolutionError("measure_effective_diffusivity: window holds < 2 snapshots");
  const double slope = (n * sts - st * ss) / (n * stt - st * st);
  return 0.5 * slope;
}

}  // namespace qdiff
