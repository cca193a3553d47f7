#include "acs/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "acs/version.hpp"

namespace acs {

double Axis::at(int i) const {
  if (count < 2) throw std::domain_error("Axis: count must be >= 2");
  const double t = static_cast<double>(i) / (count - 1);
  if (scale == Scale::linear) return min + (max - min) * t;
  return min * std::pow(max / min, t);
}

size_t GridData::expected_size() const {
  size_t n = 1;
  for (const auto& a : axes) n *= static_cast<size_t>(a.count);
  return n;
}

void GridData::validate() const {
  if (values.size() != expected_size())
    throw std::runtime_error("GridData: value count does not match axes");
  for (double v : values)
    if (std::isnan(v)) throw std::runtime_error("GridData: NaN value");
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings
  if (!out) throw std::runtime_error("write_csv: cannot open " + path.string());
  for (size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << fmt17(row[i]) << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

void write_grid_csv(const std::filesystem::path& path, const GridData& grid) {
  grid.validate();
  std::vector<std::string> header;
  for (const auto& a : grid.axes) header.push_back(a.name);
  header.push_back("value");

  std::vector<CsvRow> rows;
  rows.reserve(grid.values.size());
  std::vector<int> idx(grid.axes.size(), 0);
  for (size_t flat = 0; flat < grid.values.size(); ++flat) {
    CsvRow row;
    for (size_t d = 0; d < grid.axes.size(); ++d)
      row.push_back(grid.axes[d].at(idx[d]));
    row.push_back(grid.values[flat]);
    rows.push_back(std::move(row));
    for (int d = static_cast<int>(grid.axes.size()) - 1; d >= 0; --d) {
      if (++idx[d] < grid.axes[d].count) break;
      idx[d] = 0;
    }
  }
  write_csv(path, header, rows);
}

RunManifest::RunManifest(std::string command, nlohmann::json parameters)
    : command_(std::move(command)), params_(std::move(parameters)) {}

void RunManifest::add_file(const std::filesystem::path& p) {
  files_.push_back(p.filename().string());
}

void RunManifest::add_check(const std::string& name, double residual,
                            double tolerance) {
  checks_.push_back({{"name", name},
                     {"residual", residual},
                     {"tolerance", tolerance},
                     {"pass", residual < tolerance}});
}

void RunManifest::set_failure(const std::string& reason) { failure_ = reason; }

void RunManifest::add_note(const std::string& note) { notes_.push_back(note); }

void RunManifest::set_wall_ms(double ms) { wall_ms_ = ms; }

void RunManifest::write(const std::filesystem::path& dir) const {
  const auto path = dir / "manifest.json";
  if (std::filesystem::exists(path))
    throw std::runtime_error("RunManifest: refusing to overwrite " + path.string());
  nlohmann::json j;
  j["command"] = command_;
  j["parameters"] = params_;
  j["library_version"] = kVersion;
  j["checks"] = checks_;
  j["files"] = files_;
  j["notes"] = notes_;
  j["wall_clock_ms"] = wall_ms_;
  if (failure_)
    j["failure"] = *failure_;
  else
    j["failure"] = nullptr;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("RunManifest: cannot open " + path.string());
  out << j.dump(2) << "\n";
}

std::filesystem::path make_run_dir(const std::filesystem::path& out_root,
                                   const std::string& command,
                                   const nlohmann::json& parameters) {
  const size_t h = std::hash<std::string>{}(parameters.dump());
  std::ostringstream id;
  id << command << "-" << std::hex << (h & 0xffffffffu);
  std::filesystem::path dir = out_root / id.str();
  int k = 1;
  while (std::filesystem::exists(dir)) {
    std::ostringstream suffixed;
    suffixed << id.str() << "-" << ++k;
    dir = out_root / suffixed.str();
  }
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace acs
