#include "acs/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "acs/panel2d.hpp"
#include "acs/specfun.hpp"

namespace acs {

double fiducial_value(const FiducialVariant& f, double x) {
  return std::visit(
      [&](const auto& fid) -> double {
        using T = std::decay_t<decltype(fid)>;
        if constexpr (std::is_same_v<T, FiducialSpec>)
          return phi(fid, x);
        else
          return fid.value(x);
      },
      f);
}

MomentValue fiducial_c_gamma(const FiducialVariant& f, double gamma) {
  return std::visit(
      [&](const auto& fid) -> MomentValue {
        using T = std::decay_t<decltype(fid)>;
        if constexpr (std::is_same_v<T, FiducialSpec>)
          return c_gamma(fid, gamma);
        else
          return fid.c_gamma(gamma);
      },
      f);
}

DerivativeConstants fiducial_derivative_constants(const FiducialVariant& f) {
  return std::visit(
      [&](const auto& fid) -> DerivativeConstants {
        using T = std::decay_t<decltype(fid)>;
        if constexpr (std::is_same_v<T, FiducialSpec>)
          return derivative_constants(fid);
        else
          return fid.derivative_constants();
      },
      f);
}

namespace {

double require_moment(const FiducialVariant& fid, double gamma,
                      const char* where) {
  const auto m = fiducial_c_gamma(fid, gamma);
  if (!m.finite) {
    std::ostringstream msg;
    msg << where << ": moment c_" << gamma << " of the fiducial diverges";
    throw std::runtime_error(msg.str());
  }
  return m.value;
}

double symbol_factor(const Symbol& s, double q, double p) {
  switch (s.kind) {
    case Symbol::Kind::q_power:
      return std::pow(q, s.alpha);
    case Symbol::Kind::p_linear:
      return p;
    case Symbol::Kind::d_symbol:
      return q * p;
    case Symbol::Kind::p_squared:
      return p * p;
  }
  return 0.0;
}

// Decay exponent of the kernel tail in |p| for the tail budget; the
// oscillator fiducial gives O(p^{-2(nu+1)}), rapidly decreasing profiles
// decay faster, so this power-law fit is conservative for them.
double tail_power(const FiducialVariant& fid, double basis_nu) {
  const double nu_psi = std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FiducialSpec>)
          return f.nu;
        else
          return basis_nu;
      },
      fid);
  return 2.0 * (std::min(nu_psi, basis_nu) + 1.0);
}

}  // namespace

QuantizeResult quantize_elements(const Symbol& symbol, const FiducialVariant& fid,
                                 const BasisSpec& basis,
                                 const QuantizeOptions& opt) {
  const double c0 = require_moment(fid, 0.0, "quantize_elements");
  if (symbol.kind == Symbol::Kind::q_power)
    require_moment(fid, symbol.alpha, "quantize_elements");

  const int m = basis.size;
  const double nu_b = basis.nu, xi_b = basis.xi_ref;

  // Fixed inner substitution u = xi_b x^2; basis values and measure factors
  // are precomputed once for the whole half-plane scan.
  const auto rule = gauss_laguerre_cached(opt.inner_order, nu_b);
  const int M = opt.inner_order;
  std::vector<double> x_nodes(M);
  Eigen::MatrixXd bmat(m, M);
  {
    std::vector<double> stack(m);
    for (int j = 0; j < M; ++j) {
      const double u = rule->nodes[j];
      x_nodes[j] = std::sqrt(u / xi_b);
      weighted_laguerre_stack(nu_b, u, stack);
      const double s = std::sqrt(2.0 * xi_b * x_nodes[j]);
      const double w = rule->bare_weights[j] / (2.0 * std::sqrt(xi_b * u));
      for (int i = 0; i < m; ++i) bmat(i, j) = s * stack[i] * w;
    }
  }

  const double norm = 2.0 * std::numbers::pi * c0;

  // o_i(q,p) = <Phi_i | V_{q,p} psi0>; the phase convention of the state
  // cancels inside |q,p><q,p|.
  Eigen::VectorXcd o(m);
  Eigen::VectorXcd samples(M);
  auto overlaps = [&](double q, double p) {
    const double inv_sqrt_q = 1.0 / std::sqrt(q);
    for (int j = 0; j < M; ++j) {
      const double x = x_nodes[j];
      const double body = fiducial_value(fid, x / q) * inv_sqrt_q;
      samples[j] = std::polar(body, p * x * x / (2.0 * q));
    }
    o = bmat * samples;
  };

  const int comps = m * (m + 1) / 2;
  Integrand2D f = [&](double s, double p, std::span<std::complex<double>> out) {
    const double q = std::exp(s);
    overlaps(q, p);
    const double fac = symbol_factor(symbol, q, p) * q / norm;
    int c = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        out[c++] = o[i] * std::conj(o[j]) * fac;
  };

  Adaptive2DOptions opt2;
  opt2.abs_tol = opt.abs_tol;
  opt2.rel_tol = 1e-9;
  opt2.max_panels = opt.max_panels;
  opt2.min_subdivisions = 4;
  Rect domain{std::log(opt.q_min), std::log(opt.q_max), -opt.p_max, opt.p_max};
  const auto r2 = integrate2d(comps, f, domain, opt2);

  QuantizeResult res;
  Eigen::MatrixXcd raw(m, m);
  int c = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      raw(i, j) = r2.value[c];
      raw(j, i) = std::conj(r2.value[c]);
      ++c;
    }
  // The upper triangle is measured once, so Hermiticity holds by layout;
  // the physical defect lives in the imaginary parts of the diagonal.
  double diag_imag = 0.0;
  for (int i = 0; i < m; ++i) diag_imag = std::max(diag_imag, std::abs(raw(i, i).imag()));
  res.hermiticity_defect = diag_imag;
  for (int i = 0; i < m; ++i) raw(i, i) = raw(i, i).real();
  res.matrix = raw;
  res.quadrature_error = r2.error;
  res.converged = r2.converged;

  // |p| > p_max budget from the measured kernel envelope at the window edge.
  const double power = tail_power(fid, nu_b);
  double tail = 0.0;
  const int qs = 24;
  for (int k = 0; k < qs; ++k) {
    const double s = domain.ax + (domain.bx - domain.ax) * (k + 0.5) / qs;
    const double q = std::exp(s);
    const double dq = (domain.bx - domain.ax) / qs * q;
    overlaps(q, opt.p_max);
    double kmax = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        kmax = std::max(kmax, std::abs(o[i]) * std::abs(o[j]));
    const double sym_growth =
        (symbol.kind == Symbol::Kind::p_squared) ? opt.p_max * opt.p_max
        : (symbol.kind == Symbol::Kind::q_power) ? std::pow(q, symbol.alpha)
                                                 : q * opt.p_max;
    // int_P^inf p^growth (P/p)^power dp, two tails
    const double expo = power - ((symbol.kind == Symbol::Kind::p_squared) ? 2.0 : (symbol.kind == Symbol::Kind::q_power ? 0.0 : 1.0));
    if (expo > 1.0)
      tail += 2.0 * dq * kmax * sym_growth * opt.p_max / (expo - 1.0) / norm;
  }
  res.p_tail_bound = tail;
  return res;
}

namespace {

double ls_ratio(const Eigen::MatrixXcd& measured, const Eigen::MatrixXcd& target,
                double* residual) {
  const double denom = target.squaredNorm();
  const double ratio = (measured.cwiseProduct(target.conjugate())).sum().real() / denom;
  if (residual) {
    const double mis = (measured - ratio * target).norm();
    *residual = mis / std::max(measured.norm(), 1e-300);
  }
  return ratio;
}

}  // namespace

RatioResult verify_q_power(double alpha, const FiducialVariant& fid,
                           const BasisSpec& basis, const QuantizeOptions& opt) {
  RatioResult out;
  out.raw = quantize_elements(Symbol::q_power(alpha), fid, basis, opt);
  Basis b(basis);
  const Eigen::MatrixXcd target = b.x_power_matrix(alpha).cast<std::complex<double>>();
  out.ratio = ls_ratio(out.raw.matrix, target, &out.residual);
  out.predicted = require_moment(fid, alpha, "verify_q_power") /
                  require_moment(fid, 0.0, "verify_q_power");
  return out;
}

RatioResult verify_p(const FiducialVariant& fid, const BasisSpec& basis,
                     const QuantizeOptions& opt) {
  RatioResult out;
  out.raw = quantize_elements(Symbol::p_linear(), fid, basis, opt);
  Basis b(basis);
  const Eigen::MatrixXcd target = b.p_matrix();
  out.ratio = ls_ratio(out.raw.matrix, target, &out.residual);
  out.predicted = require_moment(fid, 1.0, "verify_p") /
                  require_moment(fid, 0.0, "verify_p");
  return out;
}

RatioResult verify_d(const FiducialVariant& fid, const BasisSpec& basis,
                     const QuantizeOptions& opt) {
  RatioResult out;
  out.raw = quantize_elements(Symbol::d_symbol(), fid, basis, opt);
  Basis b(basis);
  const Eigen::MatrixXcd target = b.d_matrix();
  out.ratio = ls_ratio(out.raw.matrix, target, &out.residual);
  out.predicted = require_moment(fid, 2.0, "verify_d") /
                  require_moment(fid, 0.0, "verify_d");
  return out;
}

P2FitResult verify_p2(const FiducialVariant& fid, const BasisSpec& basis,
                      const QuantizeOptions& opt) {
  const auto dc = fiducial_derivative_constants(fid);
  if (!dc.K.finite)
    throw std::runtime_error("verify_p2: K diverges for this fiducial");
  const double c0 = require_moment(fid, 0.0, "verify_p2");
  const double c2 = require_moment(fid, 2.0, "verify_p2");

  P2FitResult out;
  out.raw = quantize_elements(Symbol::p_squared(), fid, basis, opt);

  Basis b(basis);
  const Eigen::MatrixXd t1 = b.p2_matrix();
  const Eigen::MatrixXd t2 = b.x_power_matrix(-2.0);
  const Eigen::MatrixXd meas = out.raw.matrix.real();

  // Two-parameter least squares over the matrix entries, uniform weights.
  Eigen::Matrix2d gram;
  gram << t1.squaredNorm(), t1.cwiseProduct(t2).sum(),
      t1.cwiseProduct(t2).sum(), t2.squaredNorm();
  Eigen::Vector2d rhs;
  rhs << meas.cwiseProduct(t1).sum(), meas.cwiseProduct(t2).sum();
  const Eigen::Vector2d coef = gram.ldlt().solve(rhs);

  out.kinetic_ratio = coef[0];
  out.repulsive_coeff = coef[1];
  out.predicted_kinetic = c2 / c0;
  out.predicted_repulsive = (c2 / c0) * (dc.K.value / c2 - 1.5);
  out.residual = (meas - coef[0] * t1 - coef[1] * t2).norm() /
                 std::max(meas.norm(), 1e-300);
  return out;
}

std::pair<double, double> repulsive_positivity_identity(const FiducialVariant& fid) {
  const auto dc = fiducial_derivative_constants(fid);
  if (!dc.K.finite)
    throw std::runtime_error("repulsive_positivity_identity: K diverges");
  const double c2 = require_moment(fid, 2.0, "repulsive_positivity_identity");
  const double lhs = dc.K.value - 1.5 * c2;

  // phi(y) = y psi0(1/y); phi'(y) = psi0(1/y) - psi0'(1/y)/y.
  auto psi = [&](double x) { return fiducial_value(fid, x); };
  auto dpsi = [&](double x) {
    return std::visit(
        [&](const auto& f) -> double {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, FiducialSpec>)
            return phi_deriv(f, x);
          else
            return f.derivative(x);
        },
        fid);
  };
  auto integrand = [&](double y) {
    const double x = 1.0 / y;
    const double v = psi(x);
    if (v == 0.0 && std::abs(dpsi(x)) == 0.0) return 0.0;
    const double dphi = v - dpsi(x) / y;
    const double ph = y * v;
    return y * y * dphi * dphi + 0.5 * ph * ph;
  };

  Interval dom{0.0, std::numeric_limits<double>::infinity()};
  if (std::holds_alternative<GridFiducial>(fid)) {
    const auto& g = std::get<GridFiducial>(fid);
    dom = {1.0 / g.x_max(), 1.0 / g.x_min()};
  } else {
    dom.a = 1e-6;
  }
  const auto r = integrate(integrand, dom, adaptive_rule(1e-12, 1e-10));
  return {lhs, r.value};
}

}  // namespace acs
