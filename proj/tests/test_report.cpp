#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acs/report.hpp"

using namespace acs;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  auto dir = fs::temp_directory_path() / "acs_report_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("axis evaluation") {
  Axis lin{"q", 0.05, 10.0, 200, Axis::Scale::linear};
  CHECK(lin.at(0) == doctest::Approx(0.05));
  CHECK(lin.at(199) == doctest::Approx(10.0));
  CHECK(lin.at(39) == doctest::Approx(2.0).epsilon(1e-12));

  Axis log{"x", 1e-4, 50.0, 2048, Axis::Scale::log};
  CHECK(log.at(0) == doctest::Approx(1e-4));
  CHECK(log.at(2047) == doctest::Approx(50.0));
}

TEST_CASE("grid validation") {
  GridData g;
  g.figure_id = "t";
  g.axes = {{"a", 0.0, 1.0, 3, Axis::Scale::linear},
            {"b", 0.0, 1.0, 2, Axis::Scale::linear}};
  g.values.assign(5, 0.0);
  CHECK_THROWS_AS(g.validate(), std::runtime_error);  // 5 != 6
  g.values.assign(6, 0.0);
  g.validate();
  g.values[3] = std::nan("");
  CHECK_THROWS_AS(g.validate(), std::runtime_error);
}

TEST_CASE("csv uses 17 significant digits and LF endings") {
  const auto dir = temp_dir();
  const double v = 0.1234567890123456789;
  write_csv(dir / "t.csv", {"a", "b"}, {{v, 2.0}, {3.0, -1.0 / 3.0}});
  const auto text = slurp(dir / "t.csv");
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.find("a,b\n") == 0);
  // round-trip: the printed value parses back to the same double
  std::istringstream line(text.substr(text.find('\n') + 1));
  std::string cell;
  std::getline(line, cell, ',');
  CHECK(std::stod(cell) == v);
}

TEST_CASE("grid csv row-major layout") {
  const auto dir = temp_dir();
  GridData g;
  g.figure_id = "t";
  g.axes = {{"a", 0.0, 1.0, 2, Axis::Scale::linear},
            {"b", 0.0, 2.0, 3, Axis::Scale::linear}};
  g.values = {1, 2, 3, 4, 5, 6};
  write_grid_csv(dir / "g.csv", g);
  const auto text = slurp(dir / "g.csv");
  CHECK(text.find("a,b,value\n0,0,1\n0,1,2\n0,2,3\n1,0,4\n") != std::string::npos);
}

TEST_CASE("manifest write and append-only behavior") {
  const auto dir = temp_dir();
  RunManifest m("test", {{"x", 1}});
  m.add_check("residual", 1e-9, 1e-8);
  m.add_file(dir / "data.csv");
  m.set_wall_ms(12.5);
  m.write(dir);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK_THROWS_AS(m.write(dir), std::runtime_error);

  std::ifstream in(dir / "manifest.json");
  nlohmann::json j;
  in >> j;
  CHECK(j["command"] == "test");
  CHECK(j["checks"][0]["pass"] == true);
  CHECK(j["failure"].is_null());
}

TEST_CASE("failed runs carry a machine-readable reason") {
  const auto dir = temp_dir() / "fail";
  fs::create_directories(dir);
  RunManifest m("test", {});
  m.set_failure("tolerance not met");
  m.write(dir);
  std::ifstream in(dir / "manifest.json");
  nlohmann::json j;
  in >> j;
  CHECK(j["failure"] == "tolerance not met");
}

TEST_CASE("run directories never collide") {
  const auto root = temp_dir() / "runs";
  const auto d1 = make_run_dir(root, "cmd", {{"p", 1}});
  const auto d2 = make_run_dir(root, "cmd", {{"p", 1}});
  const auto d3 = make_run_dir(root, "cmd", {{"p", 2}});
  CHECK(d1 != d2);
  CHECK(d1 != d3);
  CHECK(fs::exists(d1));
  CHECK(fs::exists(d2));
}
