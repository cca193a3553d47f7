#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() / "acs_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const auto out_file = work_dir() / "stdout.txt";
  const auto err_file = work_dir() / "stderr.txt";
  std::ostringstream cmd;
  cmd << ACS_CLI_PATH << " " << args << " > " << out_file << " 2> " << err_file;
  const int raw = std::system(cmd.str().c_str());
  RunResult r;
  r.code = WEXITSTATUS(raw);
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

fs::path run_dir_from(const RunResult& r) {
  auto s = r.out;
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

json manifest_of(const fs::path& dir) {
  json j;
  std::ifstream in(dir / "manifest.json");
  REQUIRE(in.good());
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("fiducial command emits reports and manifest") {
  const auto out = work_dir() / "f1";
  const auto r = run("--out " + out.string() + " fiducial --nu 3 --n 0,1,2");
  CHECK(r.code == 0);
  const auto dir = run_dir_from(r);
  const auto m = manifest_of(dir);
  CHECK(m["command"] == "fiducial");
  CHECK(m["checks"].size() == 3);
  for (const auto& c : m["checks"]) CHECK(c["pass"] == true);
  CHECK(fs::exists(dir / "fiducial_nu3_n0.json"));

  json rep;
  std::ifstream in(dir / "fiducial_nu3_n0.json");
  in >> rep;
  CHECK(std::abs(rep["xi_star"].get<double>() - 3.7582529303) < 1e-6);
}

TEST_CASE("invalid nu exits 1 with the documented message") {
  const auto r = run("fiducial --nu 0.4 --n 0");
  CHECK(r.code == 1);
  CHECK(r.err.find("nu must exceed 1/2") != std::string::npos);
}

TEST_CASE("unknown figure id exits 1") {
  const auto out = work_dir() / "f2";
  const auto r = run("--out " + out.string() + " figures --id fig9");
  CHECK(r.code == 1);
}

TEST_CASE("su11 command reports the matrix and factorization") {
  const auto out = work_dir() / "s1";
  const auto r = run("--out " + out.string() + " su11 --q 2 --p 1");
  CHECK(r.code == 0);
  const auto dir = run_dir_from(r);
  json j;
  std::ifstream in(dir / "su11.json");
  in >> j;
  CHECK(std::abs(j["alpha"][0].get<double>() - 1.25) < 1e-14);
  CHECK(std::abs(j["alpha"][1].get<double>() - 0.25) < 1e-14);
  CHECK(std::abs(j["beta"][0].get<double>() + 0.25) < 1e-14);
  CHECK(std::abs(j["beta"][1].get<double>() + 0.75) < 1e-14);
  CHECK(j["reassembly_residual_left"].get<double>() < 1e-13);
  CHECK(j["reassembly_residual_right"].get<double>() < 1e-13);
}

TEST_CASE("evolve command: identical runs give byte-identical CSV") {
  const auto out = work_dir() / "e1";
  const std::string args = "--out " + out.string() +
                           " evolve --nu 3 --n 0 --q0 5 --p0 -4 "
                           "--times 0.1,0.3 --size 64";
  const auto r1 = run(args);
  const auto r2 = run(args);
  CHECK(r1.code == 0);
  CHECK(r2.code == 0);
  const auto d1 = run_dir_from(r1);
  const auto d2 = run_dir_from(r2);
  CHECK(d1 != d2);  // append-only run directories
  CHECK(slurp(d1 / "fidelity.csv") == slurp(d2 / "fidelity.csv"));
  CHECK(slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv"));

  // t = 0 would give F = 1 exactly; here just sanity-check the columns.
  const auto m = manifest_of(d1);
  CHECK(m["failure"].is_null());
}

TEST_CASE("fig3 emission") {
  const auto out = work_dir() / "g3";
  const auto r = run("--out " + out.string() + " figures --id fig3");
  CHECK(r.code == 0);
  const auto dir = run_dir_from(r);
  for (int n = 0; n <= 2; ++n)
    CHECK(fs::exists(dir / ("fig3_n" + std::to_string(n) + ".csv")));
  const auto m = manifest_of(dir);
  bool caption_note = false;
  for (const auto& note : m["notes"])
    if (note.get<std::string>().find("fig3 caption") != std::string::npos)
      caption_note = true;
  CHECK(caption_note);
}

TEST_CASE("ACS_OUT environment override") {
  const auto out = work_dir() / "env_out";
  setenv("ACS_OUT", out.string().c_str(), 1);
  const auto r = run("su11 --q 1 --p 0");
  unsetenv("ACS_OUT");
  CHECK(r.code == 0);
  CHECK(run_dir_from(r).string().find(out.string()) == 0);
}
