#include "acs/specfun.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace acs {

double log_gamma(double x) {
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << "log_gamma: argument must be positive, got " << x;
    throw std::domain_error(msg.str());
  }
  return std::lgamma(x);
}

double laguerre(int n, double nu, double y) {
  if (n < 0) throw std::domain_error("laguerre: n must be >= 0");
  double lm1 = 0.0;
  double l = 1.0;
  for (int k = 0; k < n; ++k) {
    const double lp1 = ((2.0 * k + nu + 1.0 - y) * l - (k + nu) * lm1) / (k + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

std::vector<double> laguerre_sequence(int nmax, double nu, double y) {
  if (nmax < 0) throw std::domain_error("laguerre_sequence: nmax must be >= 0");
  std::vector<double> out(static_cast<size_t>(nmax) + 1);
  out[0] = 1.0;
  if (nmax == 0) return out;
  out[1] = nu + 1.0 - y;
  for (int k = 1; k < nmax; ++k)
    out[k + 1] = ((2.0 * k + nu + 1.0 - y) * out[k] - (k + nu) * out[k - 1]) / (k + 1.0);
  return out;
}

void weighted_laguerre_stack(double nu, double u, std::span<double> out) {
  if (out.empty()) return;
  // b_0 = u^(nu/2) e^(-u/2) / sqrt(Gamma(nu+1)); log form avoids spurious
  // under/overflow of the two factors separately.
  const double log_b0 = 0.5 * (nu * std::log(u) - u - log_gamma(nu + 1.0));
  out[0] = (u > 0.0) ? std::exp(log_b0) : 0.0;
  if (out.size() == 1) return;
  out[1] = (nu + 1.0 - u) * out[0] / std::sqrt(nu + 1.0);
  for (size_t k = 1; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    out[k + 1] = ((2.0 * kk + nu + 1.0 - u) * out[k] -
                  std::sqrt(kk * (kk + nu)) * out[k - 1]) /
                 std::sqrt((kk + 1.0) * (kk + nu + 1.0));
  }
}

void weighted_laguerre_stack_deriv(double nu, double u, std::span<double> out,
                                   std::span<double> dout) {
  if (out.empty()) return;
  if (dout.size() != out.size())
    throw std::domain_error("weighted_laguerre_stack_deriv: size mismatch");
  const double log_b0 = 0.5 * (nu * std::log(u) - u - log_gamma(nu + 1.0));
  out[0] = (u > 0.0) ? std::exp(log_b0) : 0.0;
  dout[0] = (0.5 * nu / u - 0.5) * out[0];
  if (out.size() == 1) return;
  {
    const double bn = std::sqrt(nu + 1.0);
    out[1] = (nu + 1.0 - u) * out[0] / bn;
    dout[1] = ((nu + 1.0 - u) * dout[0] - out[0]) / bn;
  }
  for (size_t k = 1; k + 1 < out.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double a = 2.0 * kk + nu + 1.0;
    const double b = std::sqrt(kk * (kk + nu));
    const double bn = std::sqrt((kk + 1.0) * (kk + nu + 1.0));
    out[k + 1] = ((a - u) * out[k] - b * out[k - 1]) / bn;
    dout[k + 1] = ((a - u) * dout[k] - out[k] - b * dout[k - 1]) / bn;
  }
}

namespace {

// Orthonormal weighted Laguerre polynomials p_hat_k(x) = p_k(x) x^(mu/2) e^(-x/2)
// and derivatives, used for Newton polishing of Gauss-Laguerre nodes and for
// the Christoffel weights 1/sum_k p_hat_k^2. All values stay O(1) near nodes.
struct WeightedRecurrence {
  double mu;
  int order;

  // returns (p_hat_order, d/dx p_hat_order, sum_{k<order} p_hat_k^2)
  void eval(double x, double& p, double& dp, double& sum_sq) const {
    const double log_p0 = 0.5 * (mu * std::log(x) - x - std::lgamma(mu + 1.0));
    double pm1 = 0.0, dm1 = 0.0;
    double pk = std::exp(log_p0);
    double dk = (0.5 * mu / x - 0.5) * pk;
    sum_sq = pk * pk;
    for (int k = 0; k < order; ++k) {
      const double a = 2.0 * k + mu + 1.0;
      const double b = (k > 0) ? std::sqrt(k * (k + mu)) : 0.0;
      const double bn = std::sqrt((k + 1.0) * (k + 1.0 + mu));
      const double pn = ((x - a) * pk - b * pm1) / bn;
      const double dn = (pk + (x - a) * dk - b * dm1) / bn;
      pm1 = pk; dm1 = dk;
      pk = pn; dk = dn;
      if (k + 1 < order) sum_sq += pk * pk;
    }
    p = pk;
    dp = dk;
  }
};

}  // namespace

QuadratureRule gauss_laguerre(int order, double exponent) {
  if (order < 1) throw std::domain_error("gauss_laguerre: order must be >= 1");
  if (!(exponent > -1.0))
    throw std::domain_error("gauss_laguerre: exponent must exceed -1");

  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::gauss_laguerre;
  rule.order = order;
  rule.exponent = exponent;

  // Nodes = eigenvalues of the symmetric Jacobi matrix
  //   diag a_k = 2k+mu+1, off-diag b_k = sqrt(k(k+mu)).
  Eigen::VectorXd diag(order), sub(std::max(order - 1, 0));
  for (int k = 0; k < order; ++k) diag[k] = 2.0 * k + exponent + 1.0;
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(k * (k + exponent));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "gauss_laguerre: eigenvalue iteration failed for order=" << order
        << " exponent=" << exponent;
    throw std::runtime_error(msg.str());
  }
  Eigen::VectorXd nodes = solver.eigenvalues();

  // Newton polish on p_hat_order; eigenvalues are accurate in an absolute
  // sense but the small nodes deserve relative accuracy.
  WeightedRecurrence rec{exponent, order};
  rule.nodes.resize(order);
  rule.weights.resize(order);
  rule.log_weights.resize(order);
  rule.bare_weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = nodes[i];
    double p = 0.0, dp = 0.0, ssq = 0.0;
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
      rec.eval(x, p, dp, ssq);
      const double step = p / dp;
      x -= step;
      if (x <= 0.0) x = 0.5 * (x + step);  // keep inside the support
      if (std::abs(step) <= 1e-15 * std::abs(x) + 1e-300) {
        ok = true;
        break;
      }
    }
    if (!ok || !std::isfinite(x)) {
      std::ostringstream msg;
      msg << "gauss_laguerre: node " << i << " did not converge for order="
          << order << " exponent=" << exponent;
      throw std::runtime_error(msg.str());
    }
    rec.eval(x, p, dp, ssq);
    rule.nodes[i] = x;
    // Christoffel: w_i = 1/sum_k p_k(x_i)^2 over the orthonormal family,
    // so the weighted recurrence gives the bare weight as 1/sum p_hat_k^2.
    rule.bare_weights[i] = 1.0 / ssq;
    rule.log_weights[i] = exponent * std::log(x) - x - std::log(ssq);
    rule.weights[i] = std::exp(rule.log_weights[i]);
  }

  for (int i = 1; i < order; ++i) {
    if (!(rule.nodes[i] > rule.nodes[i - 1])) {
      std::ostringstream msg;
      msg << "gauss_laguerre: nodes not strictly increasing for order=" << order
          << " exponent=" << exponent;
      throw std::runtime_error(msg.str());
    }
  }
  return rule;
}

std::shared_ptr<const QuadratureRule> gauss_laguerre_cached(int order,
                                                            double exponent) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, std::shared_ptr<const QuadratureRule>>
      cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(order, exponent);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto rule = std::make_shared<const QuadratureRule>(gauss_laguerre(order, exponent));
  cache.emplace(key, rule);
  return rule;
}

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw std::domain_error("gauss_legendre: order must be >= 1");
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::gauss_legendre;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);

  // Newton from the Chebyshev-angle initial guess.
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < order; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / pp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

QuadratureRule adaptive_rule(double abs_tol, double rel_tol, int max_depth) {
  QuadratureRule rule;
  rule.kind = QuadratureRule::Kind::adaptive;
  rule.abs_tol = abs_tol;
  rule.rel_tol = rel_tol;
  rule.max_depth = max_depth;
  return rule;
}

namespace {

// Gauss-Kronrod 7-15 pair (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct PanelEstimate {
  T value{};
  double error = 0.0;
};

template <typename T, typename F>
PanelEstimate<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T resk{}, resg{};
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const T fsum = f(c - dx) + f(c + dx);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  const T fc = f(c);
  resk += kWgk[7] * fc;
  resg += kWg[3] * fc;

  PanelEstimate<T> est;
  est.value = h * resk;
  est.error = std::abs(h) * std::abs(resk - resg);
  return est;
}

template <typename T>
double abs_of(const T& v) {
  return std::abs(v);
}

struct Panel {
  double a, b;
  double error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename T, typename F>
IntegralResult<T> adaptive_finite(const F& f, double a, double b,
                                  const QuadratureRule& rule) {
  auto guarded = [&](double x) {
    T v = f(x);
    if (std::isnan(abs_of(v)))
      throw std::runtime_error("integrate: integrand evaluated to NaN");
    return v;
  };

  auto first = gk15<T>(guarded, a, b);
  T total = first.value;
  double total_err = first.error;
  std::vector<std::pair<Panel, PanelEstimate<T>>> live;
  live.push_back({{a, b, first.error, 0}, first});

  auto tol = [&](double val_abs) {
    return std::max(rule.abs_tol, rule.rel_tol * val_abs);
  };

  // Worklist refinement: split the worst panel until the summed error
  // estimate meets the tolerance or depth/penalty limits hit.
  const int max_panels = 4000;
  while (total_err > tol(abs_of(total)) && static_cast<int>(live.size()) < max_panels) {
    size_t worst = 0;
    for (size_t i = 1; i < live.size(); ++i)
      if (live[i].first.error > live[worst].first.error) worst = i;
    const Panel panel = live[worst].first;
    if (panel.depth >= rule.max_depth) break;

    const double mid = 0.5 * (panel.a + panel.b);
    auto left = gk15<T>(guarded, panel.a, mid);
    auto right = gk15<T>(guarded, mid, panel.b);

    total += left.value + right.value - live[worst].second.value;
    total_err += left.error + right.error - live[worst].first.error;

    live[worst] = {{panel.a, mid, left.error, panel.depth + 1}, left};
    live.push_back({{mid, panel.b, right.error, panel.depth + 1}, right});
  }

  IntegralResult<T> out;
  out.value = total;
  out.error = total_err;
  out.converged = total_err <= tol(abs_of(total));
  return out;
}

// Probe the decay scale for a semi-infinite tail: smallest L in a geometric
// ladder where |f| has dropped well below its observed maximum.
template <typename F>
double probe_decay_scale(const F& f, double a) {
  double base = std::max(1.0, std::abs(a));
  double fmax = 0.0;
  double L = base;
  for (int k = 0; k < 24; ++k) {
    const double x = a + base * std::pow(2.0, k);
    const double v = std::abs(f(x));
    if (std::isnan(v)) break;
    fmax = std::max(fmax, v);
    L = base * std::pow(2.0, k);
    if (fmax > 0.0 && v <= 1e-8 * fmax && k >= 2) break;
    if (L > 1e6) break;
  }
  return L;
}

template <typename T, typename F>
IntegralResult<T> integrate_impl(const F& f, Interval domain,
                                 const QuadratureRule& rule) {
  using Kind = QuadratureRule::Kind;
  switch (rule.kind) {
    case Kind::gauss_laguerre: {
      if (!(domain.a == 0.0) || !std::isinf(domain.b))
        throw std::domain_error("integrate: gauss_laguerre rule needs (0,inf)");
      T sum{};
      for (int i = rule.order - 1; i >= 0; --i)
        sum += rule.weights[i] * f(rule.nodes[i]);
      if (std::isnan(abs_of(sum)))
        throw std::runtime_error("integrate: integrand evaluated to NaN");
      return {sum, 0.0, true};
    }
    case Kind::gauss_legendre: {
      if (std::isinf(domain.b) || std::isinf(domain.a))
        throw std::domain_error("integrate: gauss_legendre rule needs a finite interval");
      const double c = 0.5 * (domain.a + domain.b);
      const double h = 0.5 * (domain.b - domain.a);
      T sum{};
      for (int i = 0; i < rule.order; ++i)
        sum += rule.weights[i] * f(c + h * rule.nodes[i]);
      sum *= h;
      if (std::isnan(abs_of(sum)))
        throw std::runtime_error("integrate: integrand evaluated to NaN");
      return {sum, 0.0, true};
    }
    case Kind::adaptive: {
      if (!std::isinf(domain.b))
        return adaptive_finite<T>(f, domain.a, domain.b, rule);
      // x = L + t/(1-t) maps [0,1) to [L,inf); L from the decay scale.
      const double L = domain.a + probe_decay_scale(f, domain.a);
      auto head = adaptive_finite<T>(f, domain.a, L, rule);
      auto tail_f = [&](double t) {
        const double om = 1.0 - t;
        const double x = L + t / om;
        return f(x) / (om * om);
      };
      auto tail = adaptive_finite<T>(tail_f, 0.0, 1.0 - 1e-14, rule);
      IntegralResult<T> out;
      out.value = head.value + tail.value;
      out.error = head.error + tail.error;
      out.converged = head.converged && tail.converged;
      return out;
    }
  }
  throw std::logic_error("integrate: unknown rule kind");
}

}  // namespace

IntegralResult<double> integrate_real(const std::function<double(double)>& f,
                                      Interval domain,
                                      const QuadratureRule& rule) {
  return integrate_impl<double>(f, domain, rule);
}

IntegralResult<std::complex<double>> integrate_complex(
    const std::function<std::complex<double>(double)>& f, Interval domain,
    const QuadratureRule& rule) {
  return integrate_impl<std::complex<double>>(f, domain, rule);
}

}  // namespace acs
