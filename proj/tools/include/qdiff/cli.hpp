#pragma once

// Command layer of the qdiff tool. Each command turns resolved options into
// a DiffusionReport; run() adds argument parsing, file output, the manifest
// and exit-code mapping.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdiff/report.hpp"

namespace qdiff::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // I/O and anything not classified below
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitDomain = 4,
};

/// Bad command-line input that the parser itself cannot catch.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mass by isotope name (e, mu, H, D, T) or as a number in kg.
double parse_mass(const std::string& text);

struct Fig1Options {
  double xi0_sq = 0.1;
  double tau_end = 100.0;
  std::size_t samples = 2001;
};
DiffusionReport fig1(const Fig1Options& o);

/// Log-spaced over [0.01, 0.5].
std::vector<double> default_fig2_list(std::size_t points = 15);
DiffusionReport fig2(std::span<const double> xi0_sq_list);

struct Fig3Options {
  double xi0_sq = 0.1;
  double alpha = 1.0;
  double tau_end = 30.0;
  std::size_t samples = 3001;
};
DiffusionReport fig3(const Fig3Options& o);

/// Ni(111) surface defaults.
struct LatticeOptions {
  double A = 1.67e-20;        // J
  double b = 3.3e-13;         // kg / s
  double period_angstrom = 3.6;
};

struct Fig4Options {
  LatticeOptions lattice;
  std::vector<std::string> isotopes{"H", "D", "T"};
  double T_min = 100.0;
  double T_max = 1000.0;
  std::size_t points = 46;
};
DiffusionReport fig4(const Fig4Options& o);

struct SigmaTOptions {
  LatticeOptions lattice;
  std::string mass = "H";
  double t_min = 1e-18;  // s
  double t_max = 1e-6;
  std::size_t points = 61;
};
DiffusionReport sigma_t(const SigmaTOptions& o);

enum class PdeScenario { eq9_free, eq10_free, eq16_cosine };

PdeScenario parse_scenario(const std::string& name);
const char* to_string(PdeScenario s);

struct PdeCheckOptions {
  PdeScenario scenario = PdeScenario::eq9_free;
  /// Cells on the line for the free scenarios, cells per period for eq16_cosine;
  /// zero picks the scenario default.
  std::size_t resolution = 0;
  /// Negative picks the scenario default.
  double t_end = -1.0;
};

struct PdeCheckResult {
  DiffusionReport history;
  /// Ordered summary lines "key = value".
  std::vector<std::pair<std::string, std::string>> summary;
  bool passed = false;
};
PdeCheckResult pde_check(const PdeCheckOptions& o);

struct FitOptions {
  double activation_energy = 20.0;
  std::string energy_unit = "kJ/mol";  // kJ/mol, J/mol or J
  double D0 = 3.2e-7;                   // m^2 / s
  std::string mass = "H";
  double period_angstrom = 3.6;
};
DiffusionReport fit(const FitOptions& o);

/// Parses argv, runs one command, writes its CSV and manifest into the
/// output directory and returns an ExitCode. Messages go to `out` / `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdiff::cli
