#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "qdiff/errors.hpp"
#include "qdiff/report.hpp"

using namespace qdiff;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "qdiff_report_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("real formatting") {
  CHECK(format_real(1.0) == "1.00000000000e+00");
  CHECK(format_real(-2.5e-300) == "-2.50000000000e-300");
  CHECK(format_real(0.1) == "1.00000000000e-01");
  CHECK(format_real(1.0 / 3.0) == "3.33333333333e-01");
  CHECK(format_real(0.0) == "0.00000000000e+00");
  CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("cell formatting") {
  CHECK(format_cell(Cell{}).empty());
  CHECK(format_cell(Cell{42LL}) == "42");
  CHECK(format_cell(Cell{std::string("H")}) == "H");
  CHECK(format_cell(Cell{2.0}) == "2.00000000000e+00");
}

TEST_CASE("report rows and columns") {
  DiffusionReport r;
  r.columns = {"isotope", "T", "D"};
  r.add_row({std::string("H"), 300.0, 1e-9});
  r.add_row({std::string("D"), 400LL, Cell{}});
  CHECK(r.column_index("T") == 1);
  const auto t = r.column("T");
  CHECK(t == std::vector<double>{300.0, 400.0});
  const auto d = r.column("D");
  CHECK(d[0] == 1e-9);
  CHECK(std::isnan(d[1]));
  CHECK(std::isnan(r.column("isotope")[0]));
  CHECK_THROWS_AS(r.column("nope"), DomainError);
  CHECK_THROWS_AS(r.add_row({1.0}), DomainError);
}

TEST_CASE("csv layout") {
  DiffusionReport r;
  r.columns = {"t", "sigma_sq_exact", "sigma_sq_log_asymptote"};
  r.add_row({0.5, 1.25, Cell{}});
  std::ostringstream os;
  write_csv(os, r);
  CHECK(os.str() ==
        "t,sigma_sq_exact,sigma_sq_log_asymptote\n"
        "5.00000000000e-01,1.25000000000e+00,\n");

  DiffusionReport empty;
  empty.columns = {"a", "b"};
  std::ostringstream e;
  write_csv(e, empty);
  CHECK(e.str() == "a,b\n");
}

TEST_CASE("csv files are byte-identical across writes") {
  DiffusionReport r;
  r.columns = {"x", "y"};
  for (int i = 0; i < 50; ++i) r.add_row({0.1 * i, std::exp(-0.1 * i)});
  const auto a = scratch("a.csv"), b = scratch("b.csv");
  write_csv(a, r);
  write_csv(b, r);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).find('\r') == std::string::npos);
  CHECK_THROWS_AS(write_csv(fs::path("/nonexistent_dir_qdiff/x.csv"), r), Error);
}

TEST_CASE("manifest round trip") {
  RunManifest m;
  m.command = "fig1";
  m.tool_version = "0.1.0";
  m.parameters = {{"xi0_sq", "1.00000000000e-01"}, {"const.hbar", "1.054571817e-34"}};
  m.outputs = {"fig1.csv", "extra.csv"};
  m.wall_time_s = 0.25;
  const auto p = scratch("manifest.txt");
  m.write(p);
  const auto text = slurp(p);
  CHECK(text.find("command = fig1\n") == 0);
  CHECK(text.find("param.xi0_sq = 1.00000000000e-01\n") != std::string::npos);
  CHECK(text.find("output.1 = extra.csv\n") != std::string::npos);

  const auto back = RunManifest::read(p);
  CHECK(back.command == m.command);
  CHECK(back.tool_version == m.tool_version);
  CHECK(back.parameters == m.parameters);
  CHECK(back.outputs == m.outputs);
  CHECK(back.wall_time_s == doctest::Approx(0.25));
  CHECK_THROWS_AS(RunManifest::read(scratch("missing.txt")), Error);
}
