#pragma once

// Tabular results and their on-disk form. CSV output is deterministic:
// header always present, reals in %.11e (12 significant digits), '\n' line
// endings, empty cells for missing values.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qdiff {

using Cell = std::variant<std::monostate, double, long long, std::string>;

std::string format_real(double v);
std::string format_cell(const Cell& c);

struct DiffusionReport {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Provenance (formula, parameters); written to the manifest, not the CSV.
  std::map<std::string, std::string> metadata;

  void add_row(std::vector<Cell> row);
  /// Numeric column by name; missing cells become NaN.
  std::vector<double> column(const std::string& name) const;
  std::size_t column_index(const std::string& name) const;
};

void write_csv(std::ostream& os, const DiffusionReport& report);
void write_csv(const std::filesystem::path& path, const DiffusionReport& report);

struct RunManifest {
  std::string command;
  std::string tool_version;
  /// Flat, ordered key-value parameter set including physical constants.
  std::map<std::string, std::string> parameters;
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;

  void write(const std::filesystem::path& path) const;
  static RunManifest read(const std::filesystem::path& path);
};

}  // namespace qdiff
