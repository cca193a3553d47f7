#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "acs/fiducial.hpp"
#include "acs/specfun.hpp"

using namespace acs;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Brute-force moment integral, independent of the closed forms.
double c_gamma_quadrature(const FiducialSpec& spec, double gamma) {
  const auto r = integrate(
      [&](double x) {
        const double v = phi(spec, x);
        return std::pow(x, -gamma - 2.0) * v * v;
      },
      {0.0, kInf}, adaptive_rule(1e-13, 1e-12));
  return r.value;
}

double inner(const FiducialSpec& a, const FiducialSpec& b) {
  const auto r = integrate([&](double x) { return phi(a, x) * phi(b, x); },
                           {0.0, kInf}, adaptive_rule(1e-13, 1e-12));
  return r.value;
}

}  // namespace

TEST_CASE("phi normalization and boundary") {
  const auto spec = FiducialSpec::make(3.0, 0);
  CHECK(inner(spec, spec) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(phi(spec, 0.0) == 0.0);
  const auto spec1 = FiducialSpec::make(3.0, 1);
  CHECK(std::abs(inner(spec, spec1)) < 1e-11);
}

TEST_CASE("orthonormality up to n = 8") {
  const double nu = 3.0;
  const double xi = xi_star(nu, 0);
  for (int m = 0; m <= 8; ++m)
    for (int n = m; n <= 8; ++n) {
      const auto a = FiducialSpec::with_scale(nu, m, xi);
      const auto b = FiducialSpec::with_scale(nu, n, xi);
      const double expect = (m == n) ? 1.0 : 0.0;
      CHECK(std::abs(inner(a, b) - expect) < 1e-10);
    }
}

TEST_CASE("omega direct substitution") {
  CHECK(omega(FiducialSpec::with_scale(3.0, 0, 1.0)) == doctest::Approx(8.0));
  CHECK(omega(FiducialSpec::with_scale(3.0, 1, 1.0)) == doctest::Approx(12.0));
}

TEST_CASE("eigen-residual of H0") {
  for (double nu : {1.0, 3.0, 6.0}) {
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
      CHECK(std::sqrt(err2) / w < 1e-8);
    }
  }
}

TEST_CASE("g_moment normalization G_n(1,nu) = 1") {
  for (double nu : {1.0, 3.0, 6.0})
    for (int n = 0; n <= 6; ++n)
      CHECK(g_moment(n, 1.0, nu).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("g_moment ground-level closed form") {
  for (double nu : {0.7, 3.0, 6.0})
    for (double alpha : {0.5, 1.5, 2.0, 3.25}) {
      const double expect = std::exp(log_gamma(nu + alpha) - log_gamma(nu + 1.0));
      CHECK(g_moment(0, alpha, nu).value == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("g_moment closed forms match quadrature for n <= 2") {
  for (int n : {0, 1, 2})
    for (double nu : {1.0, 3.0, 6.0})
      for (double alpha : {-0.4, 0.0, 0.5, 1.5, 2.0, 3.0}) {
        if (!(alpha + nu > 0.0)) continue;
        const double closed = g_moment(n, alpha, nu).value;
        const double quad = g_moment_quadrature(n, alpha, nu).value;
        CHECK(std::abs(closed - quad) <= 1e-10 * std::max(1.0, std::abs(closed)));
      }
}

TEST_CASE("g_moment quadrature value G_1(3/2,3)") {
  // Independent oracle: expand L_1^nu(x)^2 and integrate the three Gamma
  // terms directly.
  const double nu = 3.0, alpha = 1.5;
  const double g4a = std::exp(log_gamma(nu + alpha));
  const double g5a = std::exp(log_gamma(nu + alpha + 1.0));
  const double g6a = std::exp(log_gamma(nu + alpha + 2.0));
  const double oracle =
      (16.0 * g4a - 8.0 * g5a + g6a) / std::exp(log_gamma(nu + 2.0));
  CHECK(oracle == doctest::Approx(2.3021129118).epsilon(1e-9));
  CHECK(g_moment(1, alpha, nu).value == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(g_moment_quadrature(1, alpha, nu).value ==
        doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("g_moment divergence flag") {
  CHECK_FALSE(g_moment(1, -3.5, 3.0).finite);
  CHECK_FALSE(g_moment(4, -6.0, 6.0).finite);
}

TEST_CASE("xi_star closed forms") {
  for (double nu : {1.0, 3.0, 6.0}) {
    const double expect =
        std::exp(2.0 * (log_gamma(nu + 1.5) - log_gamma(nu + 1.0)));
    CHECK(xi_star(nu, 0) == doctest::Approx(expect).epsilon(1e-13));
  }
  CHECK(xi_star(3.0, 0) == doctest::Approx(3.7582529303).epsilon(1e-9));
  CHECK(xi_star(3.0, 1) == doctest::Approx(5.2997238588).epsilon(1e-9));
}

TEST_CASE("c_gamma special values") {
  for (double nu : {1.0, 3.0, 6.0})
    for (int n : {0, 1, 2}) {
      const auto spec = FiducialSpec::make(nu, n);
      CHECK(c_gamma(spec, -2.0).value == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(c_gamma(spec, -3.0).value == doctest::Approx(1.0).epsilon(1e-12));
    }
  const auto spec30 = FiducialSpec::make(3.0, 0);
  CHECK(c_gamma(spec30, 0.0).value ==
        doctest::Approx(xi_star(3.0, 0) / 3.0).epsilon(1e-13));
}

TEST_CASE("c_gamma divergence window") {
  const auto spec = FiducialSpec::make(1.0, 0);
  CHECK_FALSE(c_gamma(spec, 2.0).finite);   // gamma = 2nu
  CHECK_FALSE(c_gamma(spec, 2.5).finite);
  CHECK(c_gamma(spec, 1.9).finite);
}

TEST_CASE("c_gamma closed form equals direct quadrature") {
  for (double nu : {1.0, 3.0, 6.0})
    for (int n : {0, 1, 2})
      for (double gamma : {-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0}) {
        if (!(gamma < 2.0 * nu)) continue;
        const auto spec = FiducialSpec::make(nu, n);
        const double closed = c_gamma(spec, gamma).value;
        const double quad = c_gamma_quadrature(spec, gamma);
        CHECK(std::abs(closed - quad) <= 1e-10 * std::max(1.0, std::abs(closed)));
      }
}

TEST_CASE("omega_tilde and the c_{-4} relation") {
  CHECK(omega_tilde(3.0, 0) ==
        doctest::Approx(8.0 * xi_star(3.0, 0)).epsilon(1e-13));
  for (double nu : {1.0, 3.0, 6.0})
    for (int n : {0, 1, 2}) {
      const auto spec = FiducialSpec::make(nu, n);
      const double lhs = c_gamma(spec, -4.0).value;
      const double rhs = omega_tilde(nu, n) / (2.0 * spec.xi * spec.xi);
      CHECK(std::abs(lhs - rhs) < 1e-10 * rhs);
    }
  // ground level: c_{-4} = (nu+1)/xi
  const auto s = FiducialSpec::make(3.0, 0);
  CHECK(c_gamma(s, -4.0).value ==
        doctest::Approx(4.0 / xi_star(3.0, 0)).epsilon(1e-12));
  CHECK(c_gamma(s, -4.0).value == doctest::Approx(1.0643243215).epsilon(1e-9));
}

TEST_CASE("derivative constants of Phi_0") {
  const double nu = 3.0;
  const auto spec = FiducialSpec::make(nu, 0);
  const auto dc = derivative_constants(spec);

  // Oracle 1: C = omega~/2 - (nu^2 - 1/4) c_0.
  const double byvirial =
      0.5 * omega_tilde(nu, 0) - (nu * nu - 0.25) * c_gamma(spec, 0.0).value;
  CHECK(dc.C == doctest::Approx(byvirial).epsilon(1e-11));
  // which reduces to xi (nu + 1/4)/nu at the pinned scale
  CHECK(dc.C ==
        doctest::Approx(spec.xi * (nu + 0.25) / nu).epsilon(1e-12));

  // Oracle 2: direct quadrature of phi'(x)^2.
  const auto direct = integrate(
      [&](double x) {
        const double d = phi_deriv(spec, x);
        return d * d;
      },
      {0.0, kInf}, adaptive_rule(1e-13, 1e-12));
  CHECK(dc.C == doctest::Approx(direct.value).epsilon(1e-10));
  CHECK(dc.C > 0.0);
  CHECK(dc.K.finite);  // nu = 3 > 1
}

TEST_CASE("K divergence flag for nu <= 1") {
  const auto spec = FiducialSpec::make(0.8, 0);
  const auto dc = derivative_constants(spec);
  CHECK_FALSE(dc.K.finite);
  CHECK(dc.C > 0.0);
}

TEST_CASE("validate at the pinned scale") {
  for (double nu : {1.0, 3.0, 6.0})
    for (int n : {0, 1, 2}) {
      const auto rep = validate(FiducialSpec::make(nu, n));
      CHECK(rep.max_residual() < 1e-8);
    }
}

TEST_CASE("validate detects a broken scaling") {
  const double xi0 = xi_star(3.0, 0);
  const auto rep = validate(FiducialSpec::with_scale(3.0, 0, 2.0 * xi0));
  CHECK(rep.r_scaling > 0.1);   // (nu^2-1/4) c_1 != xi^2 off the pinned scale
  CHECK(rep.r_energy < 1e-10);  // <H0> = omega holds at any scale
  CHECK(rep.r_virial < 1e-10);
}

TEST_CASE("phi derivatives against finite differences") {
  const auto spec = FiducialSpec::make(3.0, 2);
  for (double x : {0.3, 0.9, 1.7}) {
    const double h = 1e-6;
    const double fd1 = (phi(spec, x + h) - phi(spec, x - h)) / (2.0 * h);
    const double fd2 =
        (phi(spec, x + h) - 2.0 * phi(spec, x) + phi(spec, x - h)) / (h * h);
    CHECK(phi_deriv(spec, x) == doctest::Approx(fd1).epsilon(1e-8));
    CHECK(phi_deriv2(spec, x) == doctest::Approx(fd2).epsilon(1e-4));
  }
}

TEST_CASE("section 3 grid fiducial") {
  const auto g = GridFiducial::section3_test_fiducial();
  CHECK(g.order() == 7);

  // Unit norm after construction.
  const auto norm = integrate(
      [&](double x) {
        const double v = g.value(x);
        return v * v;
      },
      {g.x_min(), g.x_max()}, adaptive_rule(1e-13, 1e-12));
  CHECK(norm.value == doctest::Approx(1.0).epsilon(1e-10));

  // Interpolation against the analytic profile at off-grid points.
  const double scale = g.value(1.0) / std::exp(-2.0);
  for (double x : {0.37, 0.83, 1.91, 3.456, 7.77}) {
    const double expect = scale * std::exp(-(x + 1.0 / x));
    CHECK(g.value(x) == doctest::Approx(expect).epsilon(1e-11));
  }

  // Derivative: psi' = -(1 - 1/x^2) psi.
  for (double x : {0.5, 1.0, 2.5, 5.0}) {
    const double expect = -(1.0 - 1.0 / (x * x)) * g.value(x);
    CHECK(g.derivative(x) == doctest::Approx(expect).epsilon(1e-9));
  }

  // c_0 = 1 exactly by the x -> 1/x symmetry of this profile.
  CHECK(g.c_gamma(0.0).value == doctest::Approx(1.0).epsilon(1e-9));
  // and the same symmetry pairs c_1 with c_{-3}.
  CHECK(g.c_gamma(1.0).value ==
        doctest::Approx(g.c_gamma(-3.0).value).epsilon(1e-9));

  const auto dc = g.derivative_constants();
  CHECK(dc.K.finite);
  CHECK(dc.K.value - 1.5 * g.c_gamma(2.0).value > 0.0);
}

TEST_CASE("grid fiducial rescaling law") {
  const auto g = GridFiducial::section3_test_fiducial();
  const double base = g.c_gamma(-3.0).value;
  for (double lambda : {0.5, 2.0}) {
    const auto gl = g.rescaled(lambda);
    // c_gamma(psi_lambda) = lambda^(-gamma-2) c_gamma(psi); gamma = -3 gives
    // the paper's linear scaling of c_{-3}.
    CHECK(gl.c_gamma(-3.0).value ==
          doctest::Approx(lambda * base).epsilon(1e-8));
    CHECK(gl.c_gamma(0.0).value ==
          doctest::Approx(std::pow(lambda, -2.0) * g.c_gamma(0.0).value)
              .epsilon(1e-8));
  }
}

TEST_CASE("moment report carries the full summary") {
  const auto rep = moment_report(FiducialSpec::make(3.0, 0), {-3.0, 0.0});
  CHECK(rep.c_gammas.size() == 2);
  CHECK(rep.c_gammas[0].value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.constraints.ok(1e-8));
  CHECK(rep.xi_star_value == doctest::Approx(rep.xi));
}
