#pragma once

// Run artifacts: CSV emission (17 significant digits, LF endings), grid
// data containers for the figure commands, and append-only JSON run
// manifests tying every emitted file to the exact parameter set that
// produced it.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace acs {

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int count = 2;  // number of grid nodes
  enum class Scale { linear, log } scale = Scale::linear;

  double at(int i) const;
};

struct GridData {
  std::string figure_id;
  std::vector<Axis> axes;          // row-major: last axis fastest
  std::vector<double> values;
  std::map<std::string, std::string> metadata;

  size_t expected_size() const;
  void validate() const;  // size match, no NaN
};

// One CSV row; formatted with %.17g.
using CsvRow = std::vector<double>;

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows);

// Grid CSV layout: one row per node, axis coordinates first, value last.
void write_grid_csv(const std::filesystem::path& path, const GridData& grid);

class RunManifest {
 public:
  RunManifest(std::string command, nlohmann::json parameters);

  void add_file(const std::filesystem::path& p);
  void add_check(const std::string& name, double residual, double tolerance);
  void set_failure(const std::string& reason);
  void add_note(const std::string& note);
  void set_wall_ms(double ms);

  bool has_failure() const { return failure_.has_value(); }
  const nlohmann::json& checks() const { return checks_; }

  // Serializes to <dir>/manifest.json; refuses to overwrite an existing
  // manifest (manifests are append-only at the directory level).
  void write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  nlohmann::json params_;
  nlohmann::json checks_ = nlohmann::json::array();
  std::vector<std::string> files_;
  std::vector<std::string> notes_;
  std::optional<std::string> failure_;
  double wall_ms_ = 0.0;
};

// Creates <out>/<command>-<param-hash>[-k]/ where k increments if the run
// directory already exists, keeping earlier manifests untouched.
std::filesystem::path make_run_dir(const std::filesystem::path& out_root,
                                   const std::string& command,
                                   const nlohmann::json& parameters);

}  // namespace acs
