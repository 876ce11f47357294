#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "qdiff/cli.hpp"
#include "qdiff/constants.hpp"
#include "qdiff/errors.hpp"

namespace qdiff::cli {

namespace fs = std::filesystem;
namespace c = qdiff::constants;

namespace {

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t");
    const auto b = item.find_last_not_of(" \t");
    if (a != std::string::npos) parts.push_back(item.substr(a, b - a + 1));
  }
  return parts;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> v;
  for (const auto& s : split(text)) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::logic_error&) {
      throw UsageError("not a number: '" + s + "'");
    }
  }
  return v;
}

// The resolved value of every option of a subcommand: what was given (on
// the command line or in the config file) or else the default.
std::map<std::string, std::string> resolved_options(const CLI::App& sub) {
  std::map<std::string, std::string> params;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
    } else {
      value = opt->get_default_str();
    }
    params[name] = value;
  }
  return params;
}

void add_constants(std::map<std::string, std::string>& params) {
  params["const.hbar"] = format_real(c::hbar);
  params["const.k_B"] = format_real(c::boltzmann);
  params["const.N_A"] = format_real(c::avogadro);
  params["const.angstrom"] = format_real(c::angstrom);
  params["const.m_e"] = format_real(c::mass::electron);
  params["const.m_mu"] = format_real(c::mass::muon);
  params["const.m_H"] = format_real(c::mass::hydrogen);
  params["const.m_D"] = format_real(c::mass::deuterium);
  params["const.m_T"] = format_real(c::mass::tritium);
}

void add_lattice_options(CLI::App* sub, LatticeOptions& lat) {
  sub->add_option("--amplitude", lat.A, "potential amplitude A [J]");
  sub->add_option("--friction", lat.b, "friction coefficient b [kg/s]");
  sub->add_option("--period", lat.period_angstrom, "lattice period [Angstrom]");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum and thermo-quantum diffusion experiments", "qdiff"};
  app.set_version_flag("--version", kVersion);
  app.option_defaults()->always_capture_default();
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "directory for CSV and manifest files");
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  app.require_subcommand(1, 1);

  // Each command fills `report` (and maybe prints); `name` is the file stem.
  std::function<int(DiffusionReport&)> action;
  std::string stem;
  // Resolved values that differ from what the parser saw.
  std::map<std::string, std::string> overrides;

  Fig1Options f1;
  auto* c1 = app.add_subcommand("fig1", "free dispersion xi^2(tau) and its rate");
  c1->add_option("--xi0-sq", f1.xi0_sq, "initial dimensionless dispersion");
  c1->add_option("--tau-end", f1.tau_end, "final dimensionless time");
  c1->add_option("--samples", f1.samples, "output samples including tau = 0");
  c1->callback([&] {
    stem = "fig1";
    action = [&](DiffusionReport& r) { r = fig1(f1); return kExitOk; };
  });

  std::string f2_list;
  std::size_t f2_points = 15;
  auto* c2 = app.add_subcommand("fig2", "maximal rate of xi^2 versus xi0^2");
  auto* f2_list_opt = c2->add_option("--xi0-sq-list", f2_list,
                                     "comma-separated xi0^2 values (default: log-spaced 0.01..0.5)");
  c2->add_option("--points", f2_points, "size of the default list");
  c2->callback([&] {
    stem = "fig2";
    action = [&, f2_list_opt](DiffusionReport& r) {
      const auto list = f2_list_opt->count() > 0 ? parse_reals(f2_list) : default_fig2_list(f2_points);
      std::string joined;
      for (const double x : list) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        joined += (joined.empty() ? "" : ",") + std::string(buf);
      }
      overrides["xi0-sq-list"] = joined;
      r = fig2(list);
      return kExitOk;
    };
  });

  Fig3Options f3;
  auto* c3 = app.add_subcommand("fig3", "damped Pinney dispersion of a trapped packet");
  c3->add_option("--xi0-sq", f3.xi0_sq, "initial dimensionless dispersion");
  c3->add_option("--alpha", f3.alpha, "m omega0 / b");
  c3->add_option("--tau-end", f3.tau_end, "final dimensionless time");
  c3->add_option("--samples", f3.samples, "output samples including tau = 0");
  c3->callback([&] {
    stem = "fig3";
    action = [&](DiffusionReport& r) { r = fig3(f3); return kExitOk; };
  });

  Fig4Options f4;
  std::string f4_isotopes = "H,D,T";
  auto* c4 = app.add_subcommand("fig4", "effective semiclassical diffusivity of isotopes");
  add_lattice_options(c4, f4.lattice);
  c4->add_option("--isotopes", f4_isotopes, "comma-separated masses (e, mu, H, D, T or kg)");
  c4->add_option("--temp-min", f4.T_min, "lowest temperature [K]");
  c4->add_option("--temp-max", f4.T_max, "highest temperature [K]");
  c4->add_option("--points", f4.points, "temperatures, uniform in 1/T");
  c4->callback([&] {
    stem = "fig4";
    action = [&](DiffusionReport& r) {
      f4.isotopes = split(f4_isotopes);
      r = fig4(f4);
      return kExitOk;
    };
  });

  SigmaTOptions st;
  auto* c5 = app.add_subcommand("sigma-t", "zero-temperature dispersion in a cosine lattice");
  add_lattice_options(c5, st.lattice);
  c5->add_option("--mass", st.mass, "e, mu, H, D, T or a mass in kg");
  c5->add_option("--time-min", st.t_min, "first time [s]");
  c5->add_option("--time-max", st.t_max, "last time [s]");
  c5->add_option("--points", st.points, "log-spaced times");
  c5->callback([&] {
    stem = "sigma_t";
    action = [&](DiffusionReport& r) { r = sigma_t(st); return kExitOk; };
  });

  PdeCheckOptions pc;
  std::string pc_scenario = "eq9_free";
  auto* c6 = app.add_subcommand("pde-check", "finite-volume cross-check of the density equations");
  c6->add_option("--scenario", pc_scenario, "eq9_free, eq10_free or eq16_cosine");
  c6->add_option("--resolution", pc.resolution,
                 "cells (free scenarios) or cells per period (eq16_cosine); 0 = default");
  c6->add_option("--t-end", pc.t_end, "run length; negative = scenario default");
  c6->callback([&] {
    action = [&](DiffusionReport& r) {
      pc.scenario = parse_scenario(pc_scenario);
      auto res = pde_check(pc);
      for (const auto& [k, v] : res.summary) out << k << " = " << v << '\n';
      out << "result = " << (res.passed ? "PASS" : "FAIL") << '\n';
      r = std::move(res.history);
      return res.passed ? kExitOk : kExitNumerical;
    };
    stem = "pde_" + pc_scenario;
  });

  FitOptions ft;
  auto* c7 = app.add_subcommand("fit", "model parameters from classical Arrhenius data");
  c7->add_option("--ea", ft.activation_energy, "activation energy");
  c7->add_option("--ea-unit", ft.energy_unit, "kJ/mol, J/mol or J");
  c7->add_option("--d0", ft.D0, "Arrhenius prefactor [m^2/s]");
  c7->add_option("--mass", ft.mass, "e, mu, H, D, T or a mass in kg");
  c7->add_option("--period", ft.period_angstrom, "lattice period [Angstrom]");
  c7->callback([&] {
    stem = "fit";
    action = [&](DiffusionReport& r) { r = fit(ft); return kExitOk; };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  try {
    DiffusionReport report;
    const int status = action(report);

    fs::create_directories(out_dir);
    const std::string csv_name = stem + ".csv";
    write_csv(fs::path(out_dir) / csv_name, report);

    RunManifest manifest;
    manifest.command = sub->get_name();
    manifest.tool_version = kVersion;
    manifest.parameters = resolved_options(*sub);
    for (const auto& [k, v] : overrides) manifest.parameters[k] = v;
    add_constants(manifest.parameters);
    manifest.outputs = {csv_name};
    manifest.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest.write(fs::path(out_dir) / (stem + ".manifest"));
    return status;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace qdiff::cli
