#include "acs/fiducial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "acs/specfun.hpp"

namespace acs {

namespace {

void check_spec(const FiducialSpec& spec) {
  if (!(spec.nu > 0.5)) {
    std::ostringstream msg;
    msg << "FiducialSpec: nu must exceed 1/2, got " << spec.nu;
    throw std::domain_error(msg.str());
  }
  if (spec.n < 0) throw std::domain_error("FiducialSpec: n must be >= 0");
  if (!(spec.xi > 0.0)) throw std::domain_error("FiducialSpec: xi must be positive");
}

double gamma_ratio(double a, double b) {
  return std::exp(log_gamma(a) - log_gamma(b));
}

// G_n for n <= 2 from the expanded L_n^nu coefficients; every term is a
// Gamma ratio.
double g_closed(int n, double alpha, double nu) {
  switch (n) {
    case 0:
      return gamma_ratio(nu + alpha, nu + 1.0);
    case 1: {
      const double t0 = (nu + 1.0) * (nu + 1.0) * gamma_ratio(nu + alpha, nu + 2.0);
      const double t1 = -2.0 * (nu + 1.0) * gamma_ratio(nu + alpha + 1.0, nu + 2.0);
      const double t2 = gamma_ratio(nu + alpha + 2.0, nu + 2.0);
      return t0 + t1 + t2;
    }
    case 2: {
      const double A = 0.5 * (nu + 1.0) * (nu + 2.0);
      const double B = -(nu + 2.0);
      const double C = 0.5;
      const double g0 = gamma_ratio(nu + alpha, nu + 3.0);
      const double g1 = gamma_ratio(nu + alpha + 1.0, nu + 3.0);
      const double g2 = gamma_ratio(nu + alpha + 2.0, nu + 3.0);
      const double g3 = gamma_ratio(nu + alpha + 3.0, nu + 3.0);
      const double g4 = gamma_ratio(nu + alpha + 4.0, nu + 3.0);
      return 2.0 * (A * A * g0 + 2.0 * A * B * g1 + (B * B + 2.0 * A * C) * g2 +
                    2.0 * B * C * g3 + C * C * g4);
    }
    default:
      throw std::logic_error("g_closed: only n <= 2");
  }
}

}  // namespace

FiducialSpec FiducialSpec::make(double nu, int n) {
  FiducialSpec spec{nu, n, 1.0};
  spec.xi = xi_star(nu, n);
  check_spec(spec);
  return spec;
}

FiducialSpec FiducialSpec::with_scale(double nu, int n, double xi) {
  FiducialSpec spec{nu, n, xi};
  check_spec(spec);
  return spec;
}

MomentValue g_moment_quadrature(int n, double alpha, double nu) {
  if (n < 0) throw std::domain_error("g_moment: n must be >= 0");
  if (!(alpha + nu > 0.0)) return {0.0, false};
  // The integrand is L_n^nu(x)^2 times the weight x^(nu+alpha-1) e^-x;
  // a rule with that exponent integrates the degree-2n polynomial exactly.
  const auto rule = gauss_laguerre(n + 8, nu + alpha - 1.0);
  double sum = 0.0;
  for (int i = rule.order - 1; i >= 0; --i) {
    const double l = laguerre(n, nu, rule.nodes[i]);
    sum += rule.weights[i] * l * l;
  }
  return {std::exp(log_gamma(n + 1.0) - log_gamma(nu + n + 1.0)) * sum, true};
}

MomentValue g_moment(int n, double alpha, double nu) {
  if (n < 0) throw std::domain_error("g_moment: n must be >= 0");
  if (!(nu > 0.0)) throw std::domain_error("g_moment: nu must be positive");
  if (!(alpha + nu > 0.0)) return {0.0, false};
  if (n <= 2) return {g_closed(n, alpha, nu), true};
  return g_moment_quadrature(n, alpha, nu);
}

double xi_star(double nu, int n) {
  const double g = g_moment(n, 1.5, nu).value;
  return g * g;
}

double omega(const FiducialSpec& spec) {
  check_spec(spec);
  return 2.0 * spec.xi * (2.0 * spec.n + spec.nu + 1.0);
}

double omega_tilde(double nu, int n) {
  return 2.0 * xi_star(nu, n) * (2.0 * n + nu + 1.0);
}

MomentValue c_gamma(const FiducialSpec& spec, double gamma) {
  check_spec(spec);
  const auto g = g_moment(spec.n, -0.5 * gamma, spec.nu);
  if (!g.finite) return g;  // gamma >= 2 nu
  return {std::pow(spec.xi, 1.0 + 0.5 * gamma) * g.value, true};
}

double phi(const FiducialSpec& spec, double x) {
  check_spec(spec);
  if (!(x >= 0.0)) throw std::domain_error("phi: x must be >= 0");
  if (x == 0.0) return 0.0;
  const double u = spec.xi * x * x;
  // Stack buffer for the common small-n case; phi sits in hot quadrature loops.
  double buf[32];
  if (spec.n < 32) {
    std::span<double> b(buf, static_cast<size_t>(spec.n) + 1);
    weighted_laguerre_stack(spec.nu, u, b);
    return std::sqrt(2.0 * spec.xi * x) * b[spec.n];
  }
  std::vector<double> b(static_cast<size_t>(spec.n) + 1);
  weighted_laguerre_stack(spec.nu, u, b);
  return std::sqrt(2.0 * spec.xi * x) * b[spec.n];
}

namespace {

// Values Phi_0..Phi_n at one point through the weighted stack.
std::vector<double> phi_stack(const FiducialSpec& spec, double x) {
  std::vector<double> b(static_cast<size_t>(spec.n) + 1);
  if (x <= 0.0) return b;
  weighted_laguerre_stack(spec.nu, spec.xi * x * x, b);
  const double s = std::sqrt(2.0 * spec.xi * x);
  for (auto& v : b) v *= s;
  return b;
}

}  // namespace

double phi_deriv(const FiducialSpec& spec, double x) {
  check_spec(spec);
  if (!(x > 0.0)) throw std::domain_error("phi_deriv: x must be > 0");
  const auto f = phi_stack(spec, x);
  const int n = spec.n;
  const double a = (spec.nu + 0.5 + 2.0 * n) / x - spec.xi * x;
  double d = a * f[n];
  if (n > 0) d -= (2.0 / x) * std::sqrt(n * (n + spec.nu)) * f[n - 1];
  return d;
}

double phi_deriv2(const FiducialSpec& spec, double x) {
  check_spec(spec);
  if (!(x > 0.0)) throw std::domain_error("phi_deriv2: x must be > 0");
  const auto f = phi_stack(spec, x);
  const int n = spec.n;
  const double nu = spec.nu, xi = spec.xi;

  auto deriv_at = [&](int k) {
    const double a = (nu + 0.5 + 2.0 * k) / x - xi * x;
    double d = a * f[k];
    if (k > 0) d -= (2.0 / x) * std::sqrt(k * (k + nu)) * f[k - 1];
    return d;
  };

  const double a_n = (nu + 0.5 + 2.0 * n) / x - xi * x;
  const double a_n_prime = -(nu + 0.5 + 2.0 * n) / (x * x) - xi;
  double dd = a_n_prime * f[n] + a_n * deriv_at(n);
  if (n > 0) {
    const double s = std::sqrt(n * (n + nu));
    dd += (2.0 / (x * x)) * s * f[n - 1] - (2.0 / x) * s * deriv_at(n - 1);
  }
  return dd;
}

DerivativeConstants derivative_constants(const FiducialSpec& spec) {
  check_spec(spec);
  DerivativeConstants out;
  // Both integrands are (polynomial in u) * u^mu e^-u after u = xi x^2:
  //   phi'^2 dx       -> mu = nu - 1
  //   phi'^2 x^-2 dx  -> mu = nu - 2   (finite iff nu > 1)
  const int order = spec.n + 24;
  {
    // nu > 1/2 guarantees the exponent nu - 1 > -1/2 stays valid.
    const auto r = gauss_laguerre(order, spec.nu - 1.0);
    double sum = 0.0;
    for (int i = r.order - 1; i >= 0; --i) {
      const double x = std::sqrt(r.nodes[i] / spec.xi);
      const double d = phi_deriv(spec, x);
      // measure: dx = du / (2 sqrt(xi u)); bare weights carry u^mu e^-u.
      sum += r.bare_weights[i] * d * d / (2.0 * std::sqrt(spec.xi * r.nodes[i]));
    }
    out.C = sum;
  }
  if (spec.nu > 1.0) {
    const auto r = gauss_laguerre(order, spec.nu - 2.0);
    double sum = 0.0;
    for (int i = r.order - 1; i >= 0; --i) {
      const double x = std::sqrt(r.nodes[i] / spec.xi);
      const double d = phi_deriv(spec, x);
      sum += r.bare_weights[i] * d * d /
             (r.nodes[i] / spec.xi) / (2.0 * std::sqrt(spec.xi * r.nodes[i]));
    }
    out.K = {sum, true};
  } else {
    out.K = {0.0, false};  // x^-2 phi'^2 ~ x^(2nu-3) is not integrable at 0
  }
  return out;
}

double ConstraintReport::max_residual() const {
  return std::max({r_closure, r_scaling, r_energy, r_virial});
}

ConstraintReport validate(const FiducialSpec& spec) {
  check_spec(spec);
  const double kappa = spec.nu * spec.nu - 0.25;
  const double xi2 = spec.xi * spec.xi;
  const double c0 = c_gamma(spec, 0.0).value;
  const double c1 = c_gamma(spec, 1.0).value;
  const double cm4 = c_gamma(spec, -4.0).value;
  const double w = omega(spec);
  const double C = derivative_constants(spec).C;

  ConstraintReport rep;
  const double scale = std::max(1.0, w);
  rep.r_closure = std::abs(C - kappa * (c1 * cm4 - c0)) / scale;
  rep.r_scaling = std::abs(kappa * c1 - xi2) / xi2;
  rep.r_energy = std::abs(C + kappa * c0 + xi2 * cm4 - w) / scale;
  rep.r_virial = std::abs(C + kappa * c0 - xi2 * cm4) / scale;
  return rep;
}

MomentReport moment_report(const FiducialSpec& spec,
                           const std::vector<double>& gammas) {
  check_spec(spec);
  MomentReport rep;
  rep.nu = spec.nu;
  rep.n = spec.n;
  rep.xi = spec.xi;
  rep.xi_star_value = xi_star(spec.nu, spec.n);
  rep.omega_value = omega(spec);
  rep.omega_tilde_value = omega_tilde(spec.nu, spec.n);
  rep.gammas = gammas;
  for (double g : gammas) rep.c_gammas.push_back(c_gamma(spec, g));
  const auto dc = derivative_constants(spec);
  rep.C = dc.C;
  rep.K = dc.K;
  rep.constraints = validate(spec);
  return rep;
}

// ---------------------------------------------------------------------------
// GridFiducial

GridFiducial GridFiducial::from_samples(std::vector<double> x,
                                        std::vector<double> v, int order) {
  if (x.size() != v.size() || x.size() < 8)
    throw std::domain_error("GridFiducial: need matching grids with >= 8 points");
  if (order < 1 || order > 11)
    throw std::domain_error("GridFiducial: interpolation order out of range");
  for (size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw std::domain_error("GridFiducial: grid must be strictly increasing");

  GridFiducial g;
  g.x_ = std::move(x);
  g.v_ = std::move(v);
  g.order_ = order;

  const auto rule = adaptive_rule(1e-14, 1e-12);
  const auto norm = integrate(
      [&](double t) { const double val = g.value(t); return val * val; },
      {g.x_.front(), g.x_.back()}, rule);
  if (!(norm.value > 0.0))
    throw std::domain_error("GridFiducial: samples have zero norm");
  const double s = 1.0 / std::sqrt(norm.value);
  for (auto& val : g.v_) val *= s;
  g.norm_defect_ = std::abs(norm.error * s * s);
  return g;
}

GridFiducial GridFiducial::section3_test_fiducial() {
  constexpr int kPoints = 2048;
  const double lo = std::log(1e-4), hi = std::log(50.0);
  std::vector<double> x(kPoints), v(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    x[i] = std::exp(lo + (hi - lo) * i / (kPoints - 1));
    v[i] = std::exp(-(x[i] + 1.0 / x[i]));
  }
  return from_samples(std::move(x), std::move(v), 7);
}

double GridFiducial::value(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  // Neville's scheme on the order+1 nearest grid points.
  const int m = order_ + 1;
  auto it = std::lower_bound(x_.begin(), x_.end(), x);
  int hi = static_cast<int>(it - x_.begin());
  int lo = std::clamp(hi - (m + 1) / 2, 0, static_cast<int>(x_.size()) - m);

  double p[12];
  for (int i = 0; i < m; ++i) p[i] = v_[lo + i];
  for (int level = 1; level < m; ++level)
    for (int i = 0; i < m - level; ++i) {
      const double xa = x_[lo + i], xb = x_[lo + i + level];
      p[i] = ((x - xb) * p[i] + (xa - x) * p[i + 1]) / (xa - xb);
    }
  return p[0];
}

double GridFiducial::derivative(double x) const {
  // Central differences with Richardson extrapolation; the seed step spans
  // a few grid cells so the stencil actually samples the interpolant.
  auto it = std::lower_bound(x_.begin(), x_.end(), x);
  int i = std::clamp(static_cast<int>(it - x_.begin()), 1,
                     static_cast<int>(x_.size()) - 2);
  double h = 2.0 * (x_[i + 1] - x_[i - 1]);

  constexpr int kLevels = 6;
  double table[kLevels][kLevels];
  double best = 0.0, best_err = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kLevels; ++k) {
    table[k][0] = (value(x + h) - value(x - h)) / (2.0 * h);
    double pow4 = 4.0;
    for (int j = 1; j <= k; ++j) {
      table[k][j] = (pow4 * table[k][j - 1] - table[k - 1][j - 1]) / (pow4 - 1.0);
      pow4 *= 4.0;
    }
    if (k > 0) {
      const double err = std::abs(table[k][k] - table[k - 1][k - 1]);
      if (err < best_err) {
        best_err = err;
        best = table[k][k];
      }
    }
    h *= 0.5;
  }
  return best;
}

MomentValue GridFiducial::c_gamma(double gamma) const {
  const auto rule = adaptive_rule(1e-13, 1e-11);
  auto integrand = [&](double t) {
    const double val = value(t);
    return std::pow(t, -gamma - 2.0) * val * val;
  };
  // Divergence heuristic: a moment diverges only through the x -> 0 end;
  // an integrand still growing across the first grid octave signals a
  // non-integrable power.
  const double a = x_.front();
  const double g1 = integrand(1.5 * a);
  const double g2 = integrand(3.0 * a);
  if (g1 > 0.0 && g2 > 0.0 && g1 > 2.0 * g2 && g1 * a > 1e-12)
    return {0.0, false};
  const auto r = integrate(integrand, {x_.front(), x_.back()}, rule);
  if (!r.converged) return {r.value, false};
  return {r.value, true};
}

DerivativeConstants GridFiducial::derivative_constants() const {
  DerivativeConstants out;
  const auto rule = adaptive_rule(1e-12, 1e-10);
  auto d2 = [&](double t) {
    const double d = derivative(t);
    return d * d;
  };
  const auto c = integrate(d2, {x_.front(), x_.back()}, rule);
  out.C = c.value;
  const double a = x_.front();
  const double k1 = d2(1.5 * a) / (2.25 * a * a);
  const double k2 = d2(3.0 * a) / (9.0 * a * a);
  if (k1 > 0.0 && k2 > 0.0 && k1 > 2.0 * k2 && k1 * a > 1e-12) {
    out.K = {0.0, false};
  } else {
    const auto k = integrate([&](double t) { return d2(t) / (t * t); },
                             {x_.front(), x_.back()}, rule);
    out.K = {k.value, k.converged};
    out.converged = c.converged && k.converged;
  }
  return out;
}

GridFiducial GridFiducial::rescaled(double lambda) const {
  if (!(lambda > 0.0))
    throw std::domain_error("GridFiducial::rescaled: lambda must be positive");
  std::vector<double> x(x_), v(v_);
  const double s = 1.0 / std::sqrt(lambda);
  for (auto& t : x) t *= lambda;
  for (auto& val : v) val *= s;
  return from_samples(std::move(x), std::move(v), order_);
}

}  // namespace acs
