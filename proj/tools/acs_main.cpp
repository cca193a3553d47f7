// Command-line front end: figure data reproduction, validation reports, and
// persistent run manifests. Exit codes: 0 success, 1 invalid input,
// 2 numerical non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "acs/coherent.hpp"
#include "acs/dynamics.hpp"
#include "acs/fiducial.hpp"
#include "acs/propagator.hpp"
#include "acs/quantizer.hpp"
#include "acs/report.hpp"
#include "acs/su11.hpp"
#include "acs/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start)
        .count();
  }
};

// Output directory: --out flag > ACS_OUT env > config file > ./out.
fs::path resolve_out_dir(const std::string& flag_out, const std::string& config) {
  if (!flag_out.empty()) return flag_out;
  if (const char* env = std::getenv("ACS_OUT"); env && *env) return env;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw std::runtime_error("cannot open config file " + config);
    json j;
    in >> j;
    if (j.contains("out_dir")) return j["out_dir"].get<std::string>();
  }
  return "out";
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

json moment_report_json(const acs::MomentReport& rep) {
  json j;
  j["nu"] = rep.nu;
  j["n"] = rep.n;
  j["xi"] = rep.xi;
  j["xi_star"] = rep.xi_star_value;
  j["omega"] = rep.omega_value;
  j["omega_tilde"] = rep.omega_tilde_value;
  json cg = json::array();
  for (size_t i = 0; i < rep.gammas.size(); ++i) {
    cg.push_back({{"gamma", rep.gammas[i]},
                  {"value", rep.c_gammas[i].value},
                  {"finite", rep.c_gammas[i].finite}});
  }
  j["c_gamma"] = cg;
  j["C"] = rep.C;
  j["K"] = {{"value", rep.K.value}, {"finite", rep.K.finite}};
  j["constraints"] = {{"closure", rep.constraints.r_closure},
                      {"scaling", rep.constraints.r_scaling},
                      {"energy", rep.constraints.r_energy},
                      {"virial", rep.constraints.r_virial}};
  return j;
}

int cmd_fiducial(double nu, const std::string& n_list, double tol,
                 const fs::path& out_root) {
  Timer timer;
  const auto ns = parse_int_list(n_list);
  json params = {{"nu", nu}, {"n", ns}, {"tol", tol}};
  const fs::path dir = acs::make_run_dir(out_root, "fiducial", params);
  acs::RunManifest manifest("fiducial", params);

  const std::vector<double> gammas = {-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0};
  bool all_ok = true;
  for (int n : ns) {
    const auto spec = acs::FiducialSpec::make(nu, n);
    const auto rep = acs::moment_report(spec, gammas);
    std::ostringstream name;
    name << "fiducial_nu" << nu << "_n" << n << ".json";
    std::ofstream out(dir / name.str(), std::ios::binary);
    out << moment_report_json(rep).dump(2) << "\n";
    manifest.add_file(dir / name.str());
    manifest.add_check("constraints_n" + std::to_string(n),
                       rep.constraints.max_residual(), tol);
    all_ok = all_ok && rep.constraints.ok(tol);
  }
  const double crit = nu * nu - 0.25;
  if (crit <= 0.75)
    manifest.add_note(
        "repulsive coefficient nu^2-1/4 <= 3/4: the Hamiltonian needs a "
        "self-adjoint extension choice in this regime");
  if (!all_ok) manifest.set_failure("constraint residual above threshold");
  manifest.set_wall_ms(timer.ms());
  manifest.write(dir);
  std::cout << dir.string() << "\n";
  return all_ok ? kExitOk : kExitNotConverged;
}

int cmd_su11(double q, double p, const fs::path& out_root) {
  Timer timer;
  json params = {{"q", q}, {"p", p}};
  const fs::path dir = acs::make_run_dir(out_root, "su11", params);
  acs::RunManifest manifest("su11", params);

  const auto m = acs::v_matrix(q, p);
  const auto f = acs::cartan(m);
  const auto left = acs::cartan_reassemble(f, acs::CartanSide::left);
  const auto right = acs::cartan_reassemble(f, acs::CartanSide::right);
  const double res_left = (left.full() - m.full()).cwiseAbs().maxCoeff();
  const double res_right = (right.full() - m.full()).cwiseAbs().maxCoeff();
  const auto [mp, mq] = acs::v_factor_matrices(q, p);
  const double res_factor = (mp * mq - m.full()).cwiseAbs().maxCoeff();

  json j;
  j["alpha"] = {m.alpha.real(), m.alpha.imag()};
  j["beta"] = {m.beta.real(), m.beta.imag()};
  j["unit_defect"] = m.unit_defect();
  j["theta"] = f.theta;
  j["zeta"] = {f.zeta.real(), f.zeta.imag()};
  j["zeta_prime"] = {f.zeta_prime.real(), f.zeta_prime.imag()};
  j["delta"] = f.delta;
  j["displacement"] = {f.xi_c.real(), f.xi_c.imag()};
  j["reassembly_residual_left"] = res_left;
  j["reassembly_residual_right"] = res_right;
  j["factor_product_residual"] = res_factor;
  std::ofstream out(dir / "su11.json", std::ios::binary);
  out << j.dump(2) << "\n";
  manifest.add_file(dir / "su11.json");
  manifest.add_check("unit_defect", std::abs(m.unit_defect()), 1e-12);
  manifest.add_check("reassembly_left", res_left, 1e-13);
  manifest.add_check("reassembly_right", res_right, 1e-13);
  manifest.add_check("factor_product", res_factor, 1e-13);

  const bool ok = std::abs(m.unit_defect()) < 1e-12 && res_left < 1e-13 &&
                  res_right < 1e-13 && res_factor < 1e-13;
  if (!ok) manifest.set_failure("su11 residual above threshold");
  manifest.set_wall_ms(timer.ms());
  manifest.write(dir);
  std::cout << dir.string() << "\n";
  return ok ? kExitOk : kExitNotConverged;
}

int cmd_identity(double nu, int n, int vectors, double tol,
                 const fs::path& out_root) {
  Timer timer;
  json params = {{"nu", nu}, {"n", n}, {"vectors", vectors}, {"tol", tol}};
  const fs::path dir = acs::make_run_dir(out_root, "identity", params);
  acs::RunManifest manifest("identity", params);

  const double xi = acs::xi_star(nu, n);
  std::vector<std::function<double(double)>> testvecs;
  for (int k = 0; k < vectors; ++k) {
    const auto spec = acs::FiducialSpec::with_scale(nu, k, xi);
    testvecs.push_back([spec](double x) { return acs::phi(spec, x); });
  }
  const auto res = acs::identity_check(nu, n, testvecs);

  std::vector<acs::CsvRow> rows;
  for (int i = 0; i < res.residual.rows(); ++i) {
    acs::CsvRow row;
    for (int j = 0; j < res.residual.cols(); ++j)
      row.push_back(res.residual(i, j));
    rows.push_back(row);
  }
  std::vector<std::string> header;
  for (int j = 0; j < res.residual.cols(); ++j)
    header.push_back("r" + std::to_string(j));
  acs::write_csv(dir / "residuals.csv", header, rows);
  manifest.add_file(dir / "residuals.csv");

  const double max_res = res.residual.maxCoeff();
  manifest.add_check("gram_residual", max_res, tol);
  manifest.add_check("quadrature_error", res.quadrature_error, tol);
  json j = {{"max_residual", max_res},
            {"quadrature_error", res.quadrature_error},
            {"p_tail_bound", res.p_tail_bound},
            {"q_window_defect", res.q_window_defect},
            {"p_max", res.used.p_max},
            {"q_window", {res.used.q_min, res.used.q_max}},
            {"inner_order", res.used.inner_order}};
  std::ofstream out(dir / "identity.json", std::ios::binary);
  out << j.dump(2) << "\n";
  manifest.add_file(dir / "identity.json");

  const bool ok = res.converged && max_res < tol;
  if (!ok) manifest.set_failure("identity residual above tolerance");
  manifest.set_wall_ms(timer.ms());
  manifest.write(dir);
  std::cout << dir.string() << "\n";
  return ok ? kExitOk : kExitNotConverged;
}

int cmd_evolve(double nu, int n, double q0, double p0, const std::string& times,
               int size, const fs::path& out_root) {
  Timer timer;
  const auto ts = parse_double_list(times);
  json params = {{"nu", nu}, {"n", n},       {"q0", q0},
                 {"p0", p0}, {"times", ts},  {"size", size}};
  const fs::path dir = acs::make_run_dir(out_root, "evolve", params);
  acs::RunManifest manifest("evolve", params);

  const auto rep = acs::fidelity_report(nu, n, {q0, p0}, ts, size);

  std::vector<acs::CsvRow> rows;
  double worst = 0.0;
  for (const auto& pt : rep.points) {
    rows.push_back({pt.t, pt.F.real(), pt.F.imag(), std::abs(pt.F - 1.0),
                    pt.deficit_target, pt.stability_delta});
    worst = std::max(worst, std::abs(pt.F - 1.0));
  }
  acs::write_csv(dir / "fidelity.csv",
                 {"t", "re_F", "im_F", "abs_F_minus_1", "deficit", "stability_delta"},
                 rows);
  manifest.add_file(dir / "fidelity.csv");

  const double t_max = ts.empty() ? 1.0 : *std::max_element(ts.begin(), ts.end());
  const auto traj = acs::sample_trajectory({q0, p0}, nu, n, 0.0, t_max, 601);
  std::vector<acs::CsvRow> trows;
  double qmin_seen = q0;
  for (const auto& s : traj) {
    trows.push_back({s.t, s.point.q, s.point.p, s.phi});
    qmin_seen = std::min(qmin_seen, s.point.q);
  }
  acs::write_csv(dir / "trajectory.csv", {"t", "q", "p", "phi"}, trows);
  manifest.add_file(dir / "trajectory.csv");

  const double xi = acs::xi_star(nu, n);
  json extra = {{"xi_ref", rep.xi_ref},
                {"q_min_analytic", acs::q_min({q0, p0}, xi)},
                {"q_min_emitted", qmin_seen},
                {"h_sc", acs::h_sc({q0, p0}, nu, n)}};
  std::ofstream out(dir / "evolve.json", std::ios::binary);
  out << extra.dump(2) << "\n";
  manifest.add_file(dir / "evolve.json");

  manifest.add_check("max_abs_F_minus_1", worst, 1e-5);
  for (const auto& pt : rep.points)
    manifest.add_check("stability_t" + std::to_string(pt.t), pt.stability_delta,
                       rep.stability_threshold);
  const bool ok = rep.converged;
  if (!ok) manifest.set_failure("basis-size stability check failed");
  manifest.set_wall_ms(timer.ms());
  manifest.write(dir);
  std::cout << dir.string() << "\n";
  return ok ? kExitOk : kExitNotConverged;
}

int cmd_quantize(const std::string& symbol, const std::string& fiducial,
                 double nu, int fid_n, double basis_nu, int basis_size,
                 double tol, const fs::path& out_root) {
  Timer timer;
  json params = {{"symbol", symbol},     {"fiducial", fiducial},
                 {"nu", nu},             {"fiducial_n", fid_n},
                 {"basis_nu", basis_nu}, {"basis_size", basis_size},
                 {"tol", tol}};
  const fs::path dir = acs::make_run_dir(out_root, "quantize", params);
  acs::RunManifest manifest("quantize", params);

  acs::FiducialVariant fid =
      (fiducial == "grid")
          ? acs::FiducialVariant(acs::GridFiducial::section3_test_fiducial())
          : acs::FiducialVariant(acs::FiducialSpec::make(nu, fid_n));
  const acs::BasisSpec basis{basis_nu, acs::xi_star(basis_nu, 0), basis_size};

  json j;
  bool ok = true;
  if (symbol == "p2") {
    const auto fit = acs::verify_p2(fid, basis);
    j = {{"kinetic_ratio", fit.kinetic_ratio},
         {"predicted_kinetic", fit.predicted_kinetic},
         {"repulsive_coeff", fit.repulsive_coeff},
         {"predicted_repulsive", fit.predicted_repulsive},
         {"fit_residual", fit.residual},
         {"quadrature_error", fit.raw.quadrature_error},
         {"p_tail_bound", fit.raw.p_tail_bound}};
    const double r1 = std::abs(fit.kinetic_ratio / fit.predicted_kinetic - 1.0);
    const double r2 =
        std::abs(fit.repulsive_coeff / fit.predicted_repulsive - 1.0);
    manifest.add_check("kinetic_ratio", r1, tol);
    manifest.add_check("repulsive_coeff", r2, tol);
    ok = r1 < tol && r2 < tol && fit.raw.converged;
  } else {
    acs::RatioResult res;
    if (symbol == "p") {
      res = acs::verify_p(fid, basis);
    } else if (symbol == "qp") {
      res = acs::verify_d(fid, basis);
    } else if (symbol.rfind("q^", 0) == 0) {
      res = acs::verify_q_power(std::stod(symbol.substr(2)), fid, basis);
    } else {
      std::cerr << "unknown symbol: " << symbol << "\n";
      return kExitInvalid;
    }
    j = {{"ratio", res.ratio},
         {"predicted", res.predicted},
         {"proportionality_residual", res.residual},
         {"quadrature_error", res.raw.quadrature_error},
         {"p_tail_bound", res.raw.p_tail_bound}};
    const double rel = std::abs(res.ratio / res.predicted - 1.0);
    manifest.add_check("ratio", rel, tol);
    ok = rel < tol && res.raw.converged;
  }
  std::ofstream out(dir / "quantize.json", std::ios::binary);
  out << j.dump(2) << "\n";
  manifest.add_file(dir / "quantize.json");
  if (!ok) manifest.set_failure("quantizer ratio outside tolerance");
  manifest.set_wall_ms(timer.ms());
  manifest.write(dir);
  std::cout << dir.string() << "\n";
  return ok ? kExitOk : kExitNotConverged;
}

acs::GridData husimi_grid(const acs::CSParams& psi, double nu, int nq, int np,
                          double q_lo, double q_hi, double p_lo, double p_hi,
                          const std::string& figure_id) {
  acs::GridData grid;
  grid.figure_id = figure_id;
  grid.axes = {{"q", q_lo, q_hi, nq, acs::Axis::Scale::linear},
               {"p", p_lo, p_hi, np, acs::Axis::Scale::linear}};
  grid.values.resize(static_cast<size_t>(nq) * np);
  for (int i = 0; i < nq; ++i) {
    const double q = grid.axes[0].at(i);
    for (int j = 0; j < np; ++j) {
      const double p = grid.axes[1].at(j);
      const auto analysis = acs::CSParams::make(q, p, nu, 0);
      grid.values[static_cast<size_t>(i) * np + j] =
          acs::husimi_density(analysis, psi);
    }
  }
  return grid;
}

int cmd_figures(const std::string& id, int nq, int np, const fs::path& out_root) {
  Timer timer;
  json params = {{"id", id}, {"nq", nq}, {"np", np}};
  const fs::path dir = acs::make_run_dir(out_root, "figures", params);
  acs::RunManifest manifest("figures", params);
  const double nu = 3.0;
  manifest.add_note(
      "plotting windows are not stated in the source material; the grids "
      "below record the windows actually used");

  if (id == "fig3") {
    // |Phi_n|^2 for n = 0,1,2 at the pinned scale xi_{3,n}. The caption
    // mentions H_sc = 1, which refers to no (q,p) label a fiducial carries;
    // the curves are the bare fiducials.
    manifest.add_note(
        "fig3 caption ambiguity: H_sc=1 has no effect on label-free "
        "fiducial curves; plotted at xi = xi_{3,n}");
    for (int n = 0; n <= 2; ++n) {
      const auto spec = acs::FiducialSpec::make(nu, n);
      acs::GridData g;
      g.figure_id = "fig3";
      g.axes = {{"x", 0.0, 4.0, 2001, acs::Axis::Scale::linear}};
      g.values.resize(2001);
      for (int i = 0; i < 2001; ++i) {
        const double x = g.axes[0].at(i);
        const double v = acs::phi(spec, x);
        g.values[i] = v * v;
      }
      g.metadata["n"] = std::to_string(n);
      const auto path = dir / ("fig3_n" + std::to_string(n) + ".csv");
      acs::write_grid_csv(path, g);
      manifest.add_file(path);
    }
  } else if (id == "fig2") {
    for (int n = 0; n <= 1; ++n) {
      const auto psi = acs::CSParams::make(2.0, 0.0, nu, n);
      const auto g = husimi_grid(psi, nu, nq, np, 0.05, 10.0, -10.0, 10.0,
                                 "fig2");
      const auto path = dir / ("fig2_n" + std::to_string(n) + ".csv");
      acs::write_grid_csv(path, g);
      manifest.add_file(path);
    }
  } else if (id == "fig1") {
    const acs::PhasePoint start{5.0, -4.0};
    const double xi = acs::xi_star(nu, 0);
    const std::vector<double> panel_times = {0.0, 0.25, 0.6036832427823853,
                                             1.0, 1.5, 1.8};
    for (size_t k = 0; k < panel_times.size(); ++k) {
      const auto pt = acs::flow(start, panel_times[k], xi);
      const auto psi = acs::CSParams::make(pt.q, pt.p, nu, 0);
      auto g = husimi_grid(psi, nu, nq, np, 0.05, 10.0, -10.0, 10.0, "fig1");
      g.metadata["t"] = std::to_string(panel_times[k]);
      const auto path = dir / ("fig1_t" + std::to_string(k) + ".csv");
      acs::write_grid_csv(path, g);
      manifest.add_file(path);
    }
    const auto traj = acs::sample_trajectory(start, nu, 0, 0.0, 1.8, 601);
    std::vector<acs::CsvRow> rows;
    for (const auto& s : traj) rows.push_back({s.t, s.point.q, s.point.p, s.phi});
    acs::write_csv(dir / "fig1_trajectory.csv", {"t", "q", "p", "phi"}, rows);
    manifest.add_file(dir / "fig1_trajectory.csv");
    json extra = {{"q_min_analytic", acs::q_min(start, xi)},
                  {"panel_times", panel_times}};
    std::ofstream out(dir / "fig1.json", std::ios::binary);
    out << extra.dump(2) << "\n";
    manifest.add_file(dir / "fig1.json");
  } else {
    std::cerr << "unknown figure id: " << id << "\n";
    return kExitInvalid;
  }
  manifest.set_wall_ms(timer.ms());
  manifest.write(dir);
  std::cout << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent states on the half-line: validation and figure data"};
  app.set_version_flag("--version", acs::kVersion);
  app.require_subcommand(1);

  std::string out_flag, config;
  app.add_option("--out", out_flag, "output directory (overrides ACS_OUT/config)");
  app.add_option("--config", config, "JSON config file ({\"out_dir\": ...})");

  // fiducial
  auto* fid = app.add_subcommand("fiducial", "moment and constraint report");
  double f_nu = 3.0;
  std::string f_n = "0";
  double f_tol = 1e-8;
  fid->add_option("--nu", f_nu, "repulsive-strength index")->required();
  fid->add_option("--n", f_n, "comma-separated excitation levels");
  fid->add_option("--tol", f_tol, "constraint residual threshold");

  // figures
  auto* figs = app.add_subcommand("figures", "figure data grids");
  std::string g_id;
  int g_nq = 200, g_np = 201;
  figs->add_option("--id", g_id, "fig1|fig2|fig3")->required();
  figs->add_option("--nq", g_nq, "q-axis node count");
  figs->add_option("--np", g_np, "p-axis node count");

  // evolve
  auto* ev = app.add_subcommand("evolve", "parametric-evolution fidelity");
  double e_nu = 3.0, e_q0 = 5.0, e_p0 = -4.0;
  int e_n = 0, e_size = 256;
  std::string e_times = "0.25,0.6036,1.0,1.5,2.0";
  ev->add_option("--nu", e_nu, "repulsive-strength index");
  ev->add_option("--n", e_n, "excitation level");
  ev->add_option("--q0", e_q0, "initial q");
  ev->add_option("--p0", e_p0, "initial p");
  ev->add_option("--times", e_times, "comma-separated times");
  ev->add_option("--size", e_size, "basis truncation")->check(CLI::Range(32, 4096));

  // quantize
  auto* qz = app.add_subcommand("quantize", "covariant quantization ratios");
  std::string z_symbol = "q^1", z_fid = "grid";
  double z_nu = 6.0, z_basis_nu = 3.0, z_tol = 1e-3;
  int z_fid_n = 0, z_basis_size = 6;
  qz->add_option("--symbol", z_symbol, "q^<alpha>|p|qp|p2");
  qz->add_option("--fiducial", z_fid, "grid|phi0");
  qz->add_option("--nu", z_nu, "nu of the phi0 fiducial");
  qz->add_option("--fid-n", z_fid_n, "n of the phi0 fiducial");
  qz->add_option("--basis-nu", z_basis_nu, "basis nu");
  qz->add_option("--basis-size", z_basis_size, "basis size");
  qz->add_option("--tol", z_tol, "ratio tolerance");

  // su11
  auto* su = app.add_subcommand("su11", "group matrix and Cartan factorization");
  double s_q = 2.0, s_p = 1.0;
  su->add_option("--q", s_q, "group parameter q")->required();
  su->add_option("--p", s_p, "group parameter p")->required();

  // identity
  auto* idc = app.add_subcommand("identity", "resolution-of-identity residuals");
  double i_nu = 3.0, i_tol = 1e-3;
  int i_n = 0, i_vectors = 4;
  idc->add_option("--nu", i_nu, "repulsive-strength index")->required();
  idc->add_option("--n", i_n, "excitation level");
  idc->add_option("--vectors", i_vectors, "number of test vectors");
  idc->add_option("--tol", i_tol, "residual tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*fid && !(f_nu > 0.5)) {
      std::cerr << "nu must exceed 1/2\n";
      return kExitInvalid;
    }
    if (*idc && !(i_nu > 0.5)) {
      std::cerr << "nu must exceed 1/2\n";
      return kExitInvalid;
    }
    if (*ev && !(e_nu > 0.5)) {
      std::cerr << "nu must exceed 1/2\n";
      return kExitInvalid;
    }
    if (*su && !(s_q > 0.0)) {
      std::cerr << "q must be positive\n";
      return kExitInvalid;
    }
    const fs::path out_root = resolve_out_dir(out_flag, config);

    if (*fid) return cmd_fiducial(f_nu, f_n, f_tol, out_root);
    if (*figs) return cmd_figures(g_id, g_nq, g_np, out_root);
    if (*ev) return cmd_evolve(e_nu, e_n, e_q0, e_p0, e_times, e_size, out_root);
    if (*qz)
      return cmd_quantize(z_symbol, z_fid, z_nu, z_fid_n, z_basis_nu,
                          z_basis_size, z_tol, out_root);
    if (*su) return cmd_su11(s_q, s_p, out_root);
    if (*idc) return cmd_identity(i_nu, i_n, i_vectors, i_tol, out_root);
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitNotConverged;
  }
  return kExitInvalid;
}
