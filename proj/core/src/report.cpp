#include "qdiff/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "qdiff/errors.hpp"

namespace qdiff {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_real(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

void DiffusionReport::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw DomainError("report: row has " + std::to_string(row.size()) + " cells, expected " +
                      std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::size_t DiffusionReport::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw DomainError("report: no column named '" + name + "'");
}

std::vector<double> DiffusionReport::column(const std::string& name) const {
  const std::size_t k = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (const auto* d = std::get_if<double>(&r[k])) {
      out.push_back(*d);
    } else if (const auto* i = std::get_if<long long>(&r[k])) {
      out.push_back(static_cast<double>(*i));
    } else {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return out;
}

void write_csv(std::ostream& os, const DiffusionReport& report) {
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) os << ',';
    os << report.columns[i];
  }
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_cell(row[i]);
    }
    os << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const DiffusionReport& report) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write_csv(os, report);
  if (!os) throw Error("failed writing " + path.string());
}

void RunManifest::write(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << "command = " << command << '\n';
  os << "tool_version = " << tool_version << '\n';
  for (const auto& [k, v] : parameters) os << "param." << k << " = " << v << '\n';
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    os << "output." << i << " = " << outputs[i] << '\n';
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", wall_time_s);
  os << "wall_time_s = " << buf << '\n';
}

RunManifest RunManifest::read(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  RunManifest m;
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (key == "command") {
      m.command = value;
    } else if (key == "tool_version") {
      m.tool_version = value;
    } else if (key == "wall_time_s") {
      m.wall_time_s = std::stod(value);
    } else if (key.rfind("param.", 0) == 0) {
      m.parameters[key.substr(6)] = value;
    } else if (key.rfind("output.", 0) == 0) {
      m.outputs.push_back(value);
    }
  }
  return m;
}

}  // namespace qdiff
