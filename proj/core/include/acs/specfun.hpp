#pragma once

// Special functions and quadrature primitives: log-gamma, generalized
// Laguerre polynomials, Gauss rules (generalized Gauss-Laguerre,
// Gauss-Legendre) and adaptive panel integration on finite or
// semi-infinite intervals.

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace acs {

// log Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

// Generalized Laguerre polynomial L_n^nu(y), nu > -1, by upward recurrence.
double laguerre(int n, double nu, double y);

// L_0^nu(y) .. L_nmax^nu(y) in one recurrence sweep.
std::vector<double> laguerre_sequence(int nmax, double nu, double y);

// Weight-normalized Laguerre stack
//   b_k(u) = sqrt(k!/Gamma(nu+k+1)) L_k^nu(u) u^(nu/2) e^(-u/2),
// orthonormal on (0,inf) with plain du measure. The oscillator
// eigenfunctions are Phi_k(x) = sqrt(2 xi x) b_k(xi x^2). Evaluating the
// weighted functions keeps every intermediate bounded; the bare L_k^nu
// overflow near u ~ 2k.
void weighted_laguerre_stack(double nu, double u, std::span<double> out);

// Same stack together with d/du b_k(u).
void weighted_laguerre_stack_deriv(double nu, double u, std::span<double> out,
                                   std::span<double> dout);

struct Interval {
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
};

struct QuadratureRule {
  enum class Kind { gauss_laguerre, gauss_legendre, adaptive };

  Kind kind = Kind::adaptive;
  int order = 0;
  double exponent = 0.0;  // nu of the x^nu e^-x weight (gauss_laguerre)

  // adaptive parameters
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 40;

  std::vector<double> nodes;
  // Classical weights: sum w_i f(x_i) ~ integral of f against the weight
  // function (x^nu e^-x for gauss_laguerre, 1 for gauss_legendre on [-1,1]).
  // Far gauss_laguerre weights underflow to zero above order ~180; use
  // log_weights or bare_weights there.
  std::vector<double> weights;
  // gauss_laguerre only: log of the classical weight, valid at any order.
  std::vector<double> log_weights;
  // gauss_laguerre only: bare weights for integrands that carry the
  // x^nu e^-x decay themselves: integral g(x) dx ~ sum bw_i g(x_i).
  std::vector<double> bare_weights;
};

// Generalized Gauss-Laguerre rule for weight x^exponent e^-x on (0,inf).
// Exact for polynomials of degree <= 2*order-1. Requires exponent > -1.
// Throws std::runtime_error if the node solve fails to converge.
QuadratureRule gauss_laguerre(int order, double exponent);

// Shared, memoized rule (hot loops build the same rules repeatedly).
std::shared_ptr<const QuadratureRule> gauss_laguerre_cached(int order,
                                                            double exponent);

// Gauss-Legendre rule on [-1,1].
QuadratureRule gauss_legendre(int order);

QuadratureRule adaptive_rule(double abs_tol = 1e-12, double rel_tol = 1e-10,
                             int max_depth = 40);

template <typename T>
struct IntegralResult {
  T value{};
  double error = 0.0;    // upper-bound heuristic
  bool converged = true; // false when the tolerance was not met
};

IntegralResult<double> integrate_real(const std::function<double(double)>& f,
                                      Interval domain,
                                      const QuadratureRule& rule);
IntegralResult<std::complex<double>> integrate_complex(
    const std::function<std::complex<double>(double)>& f, Interval domain,
    const QuadratureRule& rule);

// Integrate f over the domain with the given rule.
//  - gauss_laguerre: domain must be (0,inf); computes sum w_i f(x_i), i.e.
//    the integral of f(x) x^nu e^-x.
//  - gauss_legendre: finite domain, affine-mapped nodes, plain dx measure.
//  - adaptive: plain dx measure; semi-infinite upper limits are handled by
//    the substitution x = L + t/(1-t) with L probed from the integrand's
//    decay scale.
// Throws std::runtime_error if the integrand evaluates to NaN.
template <typename F>
auto integrate(F&& f, Interval domain, const QuadratureRule& rule) {
  using R = std::invoke_result_t<F, double>;
  if constexpr (std::is_same_v<R, std::complex<double>>)
    return integrate_complex(std::function<std::complex<double>(double)>(
                                 std::forward<F>(f)),
                             domain, rule);
  else
    return integrate_real(std::function<double(double)>(std::forward<F>(f)),
                          domain, rule);
}

}  // namespace acs
