#pragma once

// Fiducial vectors for the coherent-state construction: the eigenvectors
// Phi_n of the radial-oscillator Hamiltonian
//   H0 = p^2 + (nu^2 - 1/4)/x^2 + xi^2 x^2,   nu > 1/2, xi > 0,
// their moment functionals c_gamma and G_n, the scale xi_{nu,n} fixed by
// c_{-3} = 1, the derivative constants C and K, and a sampled fiducial for
// checks that assume a rapidly decreasing profile.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace acs {

// A moment that may fail to converge; divergent values carry finite=false
// instead of an infinity so callers must branch explicitly.
struct MomentValue {
  double value = 0.0;
  bool finite = true;
};

struct FiducialSpec {
  double nu;   // repulsive-strength index, > 1/2
  int n;       // excitation level, >= 0
  double xi;   // oscillator scale, > 0

  // Standard construction: xi pinned to xi_star(nu, n) so that c_{-3} = 1.
  static FiducialSpec make(double nu, int n);
  // Explicit scale override (test/diagnostic use).
  static FiducialSpec with_scale(double nu, int n, double xi);
};

// G_n(alpha, nu) = n!/Gamma(nu+n+1) * int_0^inf x^(nu+alpha-1) L_n^nu(x)^2 e^-x dx.
// Finite iff alpha + nu > 0. Closed forms for n <= 2; exact generalized
// Gauss-Laguerre quadrature above.
MomentValue g_moment(int n, double alpha, double nu);
// Quadrature-only path, any n (cross-check for the closed forms).
MomentValue g_moment_quadrature(int n, double alpha, double nu);

// xi_{nu,n} = G_n(3/2, nu)^2; imposing xi = xi_{nu,n} makes c_{-3}(Phi_n) = 1.
double xi_star(double nu, int n);

// Eigenvalue omega_n = 2 xi (2n + nu + 1) of H0 at the spec's scale.
double omega(const FiducialSpec& spec);

// omega_n at the pinned scale xi_{nu,n}.
double omega_tilde(double nu, int n);

// c_gamma(Phi_n) = xi^(1+gamma/2) G_n(-gamma/2, nu); finite iff gamma < 2 nu.
MomentValue c_gamma(const FiducialSpec& spec, double gamma);

// Phi_n(x) and derivatives, evaluated through the weight-normalized
// Laguerre recurrence (no overflow for any n, x in range).
double phi(const FiducialSpec& spec, double x);
double phi_deriv(const FiducialSpec& spec, double x);
double phi_deriv2(const FiducialSpec& spec, double x);

struct DerivativeConstants {
  double C = 0.0;       // int_0^inf psi'(x)^2 dx
  MomentValue K;        // int_0^inf y^-2 psi'(y)^2 dy (may be divergent)
  bool converged = true;
};
DerivativeConstants derivative_constants(const FiducialSpec& spec);

// Residuals of the stationarity constraints tying C, c_gamma, xi and omega:
//   (i)   C = (nu^2-1/4) [c_1 c_{-4} - c_0]
//   (ii)  (nu^2-1/4) c_1 = xi^2
//   (iii) C + (nu^2-1/4) c_0 + xi^2 c_{-4} = omega
//   (iv)  C + (nu^2-1/4) c_0 - xi^2 c_{-4} = 0
// All four vanish at xi = xi_{nu,n}; (i) and (ii) detect a broken scaling.
struct ConstraintReport {
  double r_closure = 0.0;     // (i)
  double r_scaling = 0.0;     // (ii)
  double r_energy = 0.0;      // (iii)
  double r_virial = 0.0;      // (iv)
  double max_residual() const;
  bool ok(double tol = 1e-8) const { return max_residual() < tol; }
};
ConstraintReport validate(const FiducialSpec& spec);

struct MomentReport {
  double nu;
  int n;
  double xi;
  double xi_star_value;
  double omega_value;        // at spec.xi
  double omega_tilde_value;  // at xi_star
  std::vector<double> gammas;
  std::vector<MomentValue> c_gammas;
  double C;
  MomentValue K;
  ConstraintReport constraints;
};
MomentReport moment_report(const FiducialSpec& spec,
                           const std::vector<double>& gammas);

// A real fiducial sampled on a strictly increasing grid, interpolated by a
// local polynomial of the given order. Normalized to unit L2 norm on
// construction. Values vanish outside the grid (rapid-decrease profile).
class GridFiducial {
 public:
  static GridFiducial from_samples(std::vector<double> x, std::vector<double> v,
                                   int order);
  // psi0(x) = N exp(-(x + 1/x)) on a log-uniform 2048-point grid over
  // [1e-4, 50]; rapidly decreasing at both ends, so K and every c_gamma
  // converge.
  static GridFiducial section3_test_fiducial();

  double value(double x) const;
  // Richardson-extrapolated finite difference of the interpolant.
  double derivative(double x) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  int order() const { return order_; }
  double norm_defect() const { return norm_defect_; }

  MomentValue c_gamma(double gamma) const;
  DerivativeConstants derivative_constants() const;

  // psi_lambda(x) = lambda^(-1/2) psi(x/lambda); maps c_gamma to
  // lambda^(-gamma-2) c_gamma.
  GridFiducial rescaled(double lambda) const;

 private:
  GridFiducial() = default;
  std::vector<double> x_;
  std::vector<double> v_;
  int order_ = 3;
  double norm_defect_ = 0.0;
};

}  // namespace acs
