// Acceptance suite: one line per criterion, PASS/FAIL with the measured
// worst residual and the pinned tolerance. Returns the number of failures.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "acs/coherent.hpp"
#include "acs/dynamics.hpp"
#include "acs/fiducial.hpp"
#include "acs/propagator.hpp"
#include "acs/quantizer.hpp"
#include "acs/specfun.hpp"
#include "acs/su11.hpp"

using namespace acs;
using cxd = std::complex<double>;
using namespace std::complex_literals;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
int g_failures = 0;

void report(int index, const char* label, double worst, double tol) {
  const bool pass = worst < tol;
  if (!pass) ++g_failures;
  std::printf("%s  %2d. %-38s  worst %.3e  tol %.1e\n", pass ? "PASS" : "FAIL",
              index, label, worst, tol);
  std::fflush(stdout);
}

double inner_phi(const FiducialSpec& a, const FiducialSpec& b) {
  return integrate([&](double x) { return phi(a, x) * phi(b, x); },
                   {0.0, kInf}, adaptive_rule(1e-13, 1e-12))
      .value;
}

// 1. orthonormality, eigen-residual and the four stationarity constraints
void criterion_fiducial() {
  double worst = 0.0;
  for (double nu : {1.0, 3.0, 6.0}) {
    const double xi = xi_star(nu, 0);
    for (int m = 0; m <= 2; ++m)
      for (int n = m; n <= 2; ++n) {
        const auto a = FiducialSpec::with_scale(nu, m, xi);
        const auto b = FiducialSpec::with_scale(nu, n, xi);
        const double expect = (m == n) ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(inner_phi(a, b) - expect));
      }
  }
  report(1, "fiducial orthonormality", worst, 1e-10);

  double worst_eig = 0.0, worst_con = 0.0;
  for (double nu : {1.0, 3.0, 6.0})
    for (int n : {0, 1, 2}) {
      const auto spec = FiducialSpec::make(nu, n);
      const double w = omega(spec);
      const double kappa = nu * nu - 0.25;
      const auto rule = gauss_laguerre(96 + 4 * n, nu);
      double err2 = 0.0;
      for (int j = 0; j < rule.order; ++j) {
        const double u = rule.nodes[j];
        const double x = std::sqrt(u / spec.xi);
        const double r = -phi_deriv2(spec, x) +
                         (kappa / (x * x) + spec.xi * spec.xi * x * x - w) *
                             phi(spec, x);
        err2 += rule.bare_weights[j] * r * r / (2.0 * std::sqrt(spec.xi * u));
      }
      worst_eig = std::max(worst_eig, std::sqrt(err2) / w);
      worst_con = std::max(worst_con, validate(spec).max_residual());
    }
  report(1, "fiducial eigen-residual", worst_eig, 1e-8);
  report(1, "fiducial constraints", worst_con, 1e-8);
}

// 2. scale values against Gamma-ratio and quadrature definitions
void criterion_scales() {
  const double closed =
      std::exp(2.0 * (log_gamma(4.5) - log_gamma(4.0)));
  const double r1 = std::abs(xi_star(3.0, 0) / closed - 1.0);
  report(2, "xi_{3,0} vs Gamma ratio", r1, 1e-12);

  // brute-force quadrature definition of G_0(3/2, 3)
  const double g0 = integrate(
                        [](double x) {
                          return std::pow(x, 3.0 + 1.5 - 1.0) * std::exp(-x);
                        },
                        {0.0, kInf}, adaptive_rule(1e-13, 1e-12))
                        .value /
                    std::exp(log_gamma(4.0));
  const double r2 = std::abs(xi_star(3.0, 0) / (g0 * g0) - 1.0);
  report(2, "xi_{3,0} vs quadrature definition", r2, 1e-10);

  // closed-form n = 1 evaluation through the expanded Laguerre square
  const double nu = 3.0, alpha = 1.5;
  const double g1 = ((nu + 1.0) * (nu + 1.0) * std::exp(log_gamma(nu + alpha)) -
                     2.0 * (nu + 1.0) * std::exp(log_gamma(nu + alpha + 1.0)) +
                     std::exp(log_gamma(nu + alpha + 2.0))) /
                    std::exp(log_gamma(nu + 2.0));
  const double r3 = std::abs(xi_star(3.0, 1) / (g1 * g1) - 1.0);
  report(2, "xi_{3,1} vs closed-form n=1", r3, 1e-10);
}

// 3. label matching by quadrature
void criterion_labels() {
  double worst = 0.0;
  const double qs[3] = {0.8, 2.0, 5.0};
  const double ps[3] = {-4.0, 0.0, 3.0};
  for (double nu : {1.0, 3.0})
    for (int n : {0, 1, 2})
      for (double q : qs)
        for (double p : ps) {
          const auto cs = CSParams::make(q, p, nu, n);
          const auto fid = cs.fiducial();
          auto wf = [&](double x) { return wavefunction(cs, x); };
          auto dwf = [&](double x) {
            const cxd osc = phase_prefactor(cs) *
                            std::exp(cxd(0.0, p * x * x / (2.0 * q))) /
                            std::sqrt(q);
            return osc * (phi_deriv(fid, x / q) / q +
                          cxd(0.0, p * x / q) * phi(fid, x / q));
          };
          const double xq =
              integrate([&](double x) { return x * std::norm(wf(x)); },
                        {0.0, kInf}, adaptive_rule(1e-12, 1e-11))
                  .value;
          worst = std::max(worst, std::abs(xq - q) / std::max(1.0, q));
          const double pq =
              integrate(
                  [&](double x) { return std::imag(std::conj(wf(x)) * dwf(x)); },
                  {0.0, kInf}, adaptive_rule(1e-12, 1e-11))
                  .value;
          worst = std::max(worst, std::abs(pq - p) / std::max(1.0, std::abs(p)));
          const double hq =
              integrate([&](double x) { return std::norm(dwf(x)); }, {0.0, kInf},
                        adaptive_rule(1e-12, 1e-11))
                  .value +
              (nu * nu - 0.25) *
                  integrate(
                      [&](double x) { return std::norm(wf(x)) / (x * x); },
                      {0.0, kInf}, adaptive_rule(1e-12, 1e-11))
                      .value;
          const double hpred = (2.0 * n + nu + 1.0) / cs.xi *
                               (p * p + cs.xi * cs.xi / (q * q));
          worst = std::max(worst, std::abs(hq - hpred) / std::max(1.0, hpred));
        }
  report(3, "label matching <x>,<p>,<H>", worst, 1e-8);
}

// 4. parametric evolution fidelity
void criterion_fidelity() {
  const std::vector<double> times{0.25, 0.6036, 1.0, 1.5, 2.0};
  double worst_f = 0.0, worst_s = 0.0;
  for (int n : {0, 1}) {
    const auto rep = fidelity_report(3.0, n, {5.0, -4.0}, times, 256, 1e-6);
    for (const auto& pt : rep.points) {
      worst_f = std::max(worst_f, std::abs(pt.F - 1.0));
      worst_s = std::max(worst_s, pt.stability_delta);
    }
  }
  report(4, "parametric evolution |F-1|", worst_f, 1e-5);
  report(4, "parametric evolution N vs 2N", worst_s, 1e-6);
}

// 5. n = 0 overlap closed form on random label pairs
void criterion_overlap() {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> qs(0.5, 4.0), ps(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto a = CSParams::make(qs(gen), ps(gen), 3.0, 0);
    const auto b = CSParams::make(qs(gen), ps(gen), 3.0, 0);
    const auto ov = overlap(a, b, 384);
    worst = std::max(worst,
                     std::abs(std::norm(ov.value) - overlap_n0_closed_form_sq(a, b)));
  }
  report(5, "n=0 overlap closed form", worst, 1e-10);
}

// 6. resolution of identity, 4x4 Gram block
void criterion_identity() {
  const double nu = 3.0;
  const double xi = xi_star(nu, 0);
  std::vector<std::function<double(double)>> vecs;
  for (int k = 0; k < 4; ++k) {
    const auto spec = FiducialSpec::with_scale(nu, k, xi);
    vecs.push_back([spec](double x) { return phi(spec, x); });
  }
  const auto res = identity_check(nu, 0, vecs);
  std::printf("      identity budget: quadrature %.2e, p-tail %.2e, q-edge %.2e\n",
              res.quadrature_error, res.p_tail_bound, res.q_window_defect);
  report(6, "resolution of identity 4x4", res.residual.maxCoeff(), 1e-3);
}

// 7. quantizer ratios, p^2 fit and the positivity identity
void criterion_quantizer() {
  const FiducialVariant grid = GridFiducial::section3_test_fiducial();
  const BasisSpec basis{3.0, xi_star(3.0, 0), 5};
  QuantizeOptions opt;
  opt.inner_order = 128;
  opt.abs_tol = 1e-4;

  double worst_ratio = 0.0;
  for (double alpha : {-1.0, 1.0, 2.0}) {
    const auto r = verify_q_power(alpha, grid, basis, opt);
    worst_ratio = std::max(worst_ratio, std::abs(r.ratio / r.predicted - 1.0));
  }
  {
    const auto r = verify_d(grid, basis, opt);
    worst_ratio = std::max(worst_ratio, std::abs(r.ratio / r.predicted - 1.0));
  }
  report(7, "quantizer q^a and qp ratios", worst_ratio, 1e-3);

  const auto fit = verify_p2(grid, basis, opt);
  const double worst_fit =
      std::max(std::abs(fit.kinetic_ratio / fit.predicted_kinetic - 1.0),
               std::abs(fit.repulsive_coeff / fit.predicted_repulsive - 1.0));
  report(7, "quantizer p^2 two-coefficient fit", worst_fit, 1e-2);

  const auto [lhs, rhs] = repulsive_positivity_identity(grid);
  report(7, "positivity identity K - 3c2/2",
         std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), 1e-8);
}

// 8. SU(1,1) structure
void criterion_su11() {
  std::mt19937 gen(77);
  std::uniform_real_distribution<double> qs(0.2, 5.0), ps(-4.0, 4.0);
  double worst_unit = 0.0, worst_hom = 0.0, worst_cartan = 0.0;
  for (int i = 0; i < 100; ++i) {
    const GroupElement a{qs(gen), ps(gen)}, b{qs(gen), ps(gen)};
    const auto ma = v_matrix(a.q, a.p);
    worst_unit = std::max(worst_unit, std::abs(ma.unit_defect()));
    const auto ab = group_law(a, b);
    worst_hom = std::max(
        worst_hom, ((ma.full() * v_matrix(b.q, b.p).full()) -
                    v_matrix(ab.q, ab.p).full())
                       .cwiseAbs()
                       .maxCoeff());
    const auto f = cartan(ma);
    worst_cartan = std::max(
        worst_cartan,
        (cartan_reassemble(f, CartanSide::left).full() - ma.full())
            .cwiseAbs()
            .maxCoeff());
    worst_cartan = std::max(
        worst_cartan,
        (cartan_reassemble(f, CartanSide::right).full() - ma.full())
            .cwiseAbs()
            .maxCoeff());
  }
  report(8, "su11 unit defect", worst_unit, 1e-12);
  report(8, "su11 homomorphism", worst_hom, 1e-12);
  report(8, "su11 Cartan reassembly", worst_cartan, 1e-13);

  const double nu = 3.0;
  const int N = 24;
  const auto rep = algebra_rep(nu, N);
  const double C = nu * nu - 0.25;
  const int in = N - 2, in2 = N - 3;
  const Eigen::MatrixXcd k0 = rep.K0, kp = rep.Kp, km = rep.Km;
  double worst_alg = (k0 * kp - kp * k0 - kp).topLeftCorner(in, in).cwiseAbs().maxCoeff();
  worst_alg = std::max(worst_alg, (kp * km - km * kp + 2.0 * k0)
                                      .topLeftCorner(in, in)
                                      .cwiseAbs()
                                      .maxCoeff());
  const Eigen::MatrixXcd cas =
      rep.casimir().topLeftCorner(in2, in2) -
      0.25 * (0.75 - C) * Eigen::MatrixXcd::Identity(in2, in2);
  worst_alg = std::max(worst_alg, cas.cwiseAbs().maxCoeff());
  report(8, "su11 commutators and Casimir", worst_alg, 1e-10);

  Basis basis({nu, 0.5, 16});
  const Eigen::MatrixXd h_quad =
      basis.p2_matrix() + C * basis.x_power_matrix(-2.0);
  const int hb = 14;
  const double worst_h =
      (rep.h_matrix().topLeftCorner(hb, hb) -
       h_quad.topLeftCorner(hb, hb).cast<cxd>())
          .cwiseAbs()
          .maxCoeff();
  report(8, "su11 H = K0 + K1 reconstruction", worst_h, 1e-8);
}

// 9. figure data invariants
void criterion_figures() {
  const double nu = 3.0;
  // fig3: normalization by Simpson on the emitted grid and the interior
  // minima count.
  double worst_norm = 0.0;
  bool minima_ok = true;
  for (int n = 0; n <= 2; ++n) {
    const auto spec = FiducialSpec::make(nu, n);
    const int pts = 2001;
    const double hi = 4.0, h = hi / (pts - 1);
    std::vector<double> vals(pts), raw(pts);
    for (int i = 0; i < pts; ++i) {
      raw[i] = phi(spec, i * h);
      vals[i] = raw[i] * raw[i];
    }
    double simpson = vals[0] + vals[pts - 1];
    for (int i = 1; i < pts - 1; ++i) simpson += vals[i] * (i % 2 ? 4.0 : 2.0);
    simpson *= h / 3.0;
    worst_norm = std::max(worst_norm, std::abs(simpson - 1.0));
    int crossings = 0;
    for (int i = 2; i < pts; ++i)
      if (raw[i - 1] != 0.0 && raw[i] * raw[i - 1] < 0.0) ++crossings;
    minima_ok = minima_ok && (crossings == n);
  }
  report(9, "fig3 normalization", worst_norm, 1e-8);
  report(9, "fig3 interior minima count", minima_ok ? 0.0 : 1.0, 0.5);

  // fig2: peak value at (2,0) for n=0 and the central hole for n=1.
  const double peak_expect =
      1.0 / (2.0 * std::numbers::pi * c0_constant(nu, 0));
  const auto psi0 = CSParams::make(2.0, 0.0, nu, 0);
  const auto at_center = CSParams::make(2.0, 0.0, nu, 0);
  const double peak = husimi_density(at_center, psi0);
  report(9, "fig2 n=0 peak value", std::abs(peak - peak_expect), 1e-6);

  const auto psi1 = CSParams::make(2.0, 0.0, nu, 1);
  const double center1 = husimi_density(at_center, psi1);
  double ring_max = center1;
  for (int i = 0; i < 40; ++i) {
    const double q = 0.5 + 3.5 * i / 39.0;
    for (int j = 0; j < 41; ++j) {
      const double p = -4.0 + 8.0 * j / 40.0;
      ring_max = std::max(
          ring_max, husimi_density(CSParams::make(q, p, nu, 0), psi1));
    }
  }
  report(9, "fig2 n=1 central hole", (center1 < ring_max) ? 0.0 : 1.0, 0.5);

  // fig1: bounce radius and the peak tracking the label within one cell.
  const PhasePoint start{5.0, -4.0};
  const double xi = xi_star(nu, 0);
  report(9, "fig1 q_min",
         std::abs(q_min(start, xi) - xi / std::sqrt(h_sc(start, nu, 0))), 1e-8);

  const int nq = 200, np = 201;
  const double dq = (10.0 - 0.05) / (nq - 1), dp = 20.0 / (np - 1);
  double worst_track = 0.0;
  for (double t : {0.0, 0.25, 0.6036832427823853, 1.0, 1.5, 1.8}) {
    const auto pt = flow(start, t, xi);
    const auto psi = CSParams::make(pt.q, pt.p, nu, 0);
    double best = -1.0;
    double bq = 0.0, bp = 0.0;
    for (int i = 0; i < nq; ++i) {
      const double q = 0.05 + dq * i;
      // the density is concentrated near p_t; a band keeps this scan fast
      for (int j = 0; j < np; ++j) {
        const double p = -10.0 + dp * j;
        if (std::abs(p - pt.p) > 3.0) continue;
        const double rho = husimi_density(CSParams::make(q, p, nu, 0), psi);
        if (rho > best) {
          best = rho;
          bq = q;
          bp = p;
        }
      }
    }
    worst_track = std::max(worst_track,
                           std::max(std::abs(bq - pt.q) / dq,
                                    std::abs(bp - pt.p) / dp));
  }
  report(9, "fig1 peak tracks labels (cells)", worst_track, 1.0 + 1e-9);
}

// 10. Liouville transport
void criterion_liouville() {
  const double nu = 3.0;
  const auto a = CSParams::make(2.0, 1.0, nu, 0);
  const auto b = CSParams::make(3.0, -1.0, nu, 0);
  const std::vector<CSParams> comps{a, b};
  const std::vector<cxd> amps{1.0, 1.0};
  const std::vector<PhasePoint> samples{
      {2.0, 1.0}, {2.5, 0.0}, {3.5, -1.5}, {1.5, 0.5}, {4.0, 1.0}};
  const auto res = liouville_check(nu, 0, comps, amps, samples, 0.5, 256);
  report(10, "liouville transport", res.max_residual, 1e-4);
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  criterion_fiducial();
  criterion_scales();
  criterion_labels();
  criterion_fidelity();
  criterion_overlap();
  criterion_identity();
  criterion_quantizer();
  criterion_su11();
  criterion_figures();
  criterion_liouville();
  std::printf("%d failure(s)\n", g_failures);
  return g_failures;
}
