#pragma once

// Exact Schroedinger evolution for H_nu = p^2 + (nu^2-1/4)/x^2 by spectral
// Galerkin in the eigenbasis of the radial oscillator H0(xi_ref). The 1/x^2
// potential lives inside H0, so it is represented exactly; the only
// approximations are the basis truncation and the projection quadrature,
// both of which are reported.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "acs/coherent.hpp"
#include "acs/dynamics.hpp"
#include "acs/specfun.hpp"

namespace acs {

struct BasisSpec {
  double nu;      // > 1/2
  double xi_ref;  // > 0, basis oscillator scale
  int size;       // >= 8
};

class Basis {
 public:
  // quad_order = 0 picks 2*size + 256.
  explicit Basis(const BasisSpec& spec, int quad_order = 0);

  const BasisSpec& spec() const { return spec_; }
  int quad_order() const { return quad_order_; }

  // Phi_0..Phi_{size-1} at one point.
  void eval_stack(double x, std::span<double> out) const;

  // c_k = <Phi_k|psi> on the basis rule; deficit receives 1 - ||c||^2
  // (meaningful for normalized psi).
  Eigen::VectorXcd project(const std::function<std::complex<double>(double)>& psi,
                           double* deficit = nullptr) const;

  // Coherent-state fast path. The quadrature variable is matched to the
  // combined Gaussian decay of Phi_k * psi_cs, which removes every
  // exponential factor from the rule mismatch and leaves pure oscillation.
  Eigen::VectorXcd project_cs(const CSParams& cs, double* deficit = nullptr) const;

  // Operator matrices by quadrature, exact for their polynomial kernels.
  Eigen::MatrixXd x_power_matrix(double alpha) const;  // alpha > -2nu-2
  Eigen::MatrixXd p2_matrix() const;                   // <j|p^2|k>, real
  Eigen::MatrixXcd p_matrix() const;                   // -i d/dx, imaginary entries
  Eigen::MatrixXcd d_matrix() const;                   // -i(x d/dx + 1/2)

 private:
  BasisSpec spec_;
  int quad_order_;
  std::shared_ptr<const QuadratureRule> rule_;
  std::vector<double> x_nodes_;   // x_j = sqrt(u_j / xi_ref)
  std::vector<double> meas_;      // bare_w / (2 sqrt(xi u))
  Eigen::MatrixXd values_;        // (size x order) Phi_k(x_j)
};

// Tridiagonal matrix of x^2 in the basis: diagonal (2k+nu+1)/xi_ref,
// off-diagonal -sqrt((k+1)(k+nu+1))/xi_ref. Construction cross-checks the
// closed form against quadrature and throws std::runtime_error on
// disagreement beyond 1e-8.
Eigen::MatrixXd x2_matrix(const BasisSpec& spec);

// H_nu in the basis: diag(omega_k) - xi_ref^2 * x2_matrix.
Eigen::MatrixXd hnu_matrix(const BasisSpec& spec);

struct StateVector {
  Eigen::VectorXcd c;
  double deficit = 0.0;
  BasisSpec basis;
};

// exp(-iHt) through a full Hermitian eigendecomposition, reused across
// times. Unitary to rounding.
class Propagator {
 public:
  explicit Propagator(const Eigen::MatrixXd& h);
  Eigen::VectorXcd apply(const Eigen::VectorXcd& c, double t) const;
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd eigenvalues_;
};

// Geometric-mean basis scale minimizing the truncation tail over a set of
// coherent states: per state the optimal scale is |xi - i q p| / q^2.
double adapted_basis_scale(std::span<const CSParams> states);

struct FidelityPoint {
  double t;
  std::complex<double> F;        // at size N
  std::complex<double> F_check;  // at size 2N
  double deficit_initial;
  double deficit_target;
  double stability_delta;        // |F - F_check|
};

struct FidelityReport {
  std::vector<FidelityPoint> points;
  int size;
  double xi_ref;
  bool converged = true;  // every stability delta below the threshold
  double stability_threshold;
};

// F(t) = <Q_t,P_t; nu,n| exp(-i H_nu t) |q0,p0; nu,n>, which the parametric
// evolution predicts to be exactly 1. The N and 2N bases are nested, so one
// projection serves both.
FidelityReport fidelity_report(double nu, int n, const PhasePoint& p0,
                               std::span<const double> times, int size,
                               double stability_threshold = 1e-6,
                               double xi_ref_override = 0.0);

struct LiouvilleResult {
  std::vector<double> residuals;
  double max_residual = 0.0;
  double deficit = 0.0;
  bool converged = true;
};

// Transport check: |<q,p;nu,n| e^{-iHt} |psi> - <Q_{-t},P_{-t};nu,n|psi>|
// for psi a normalized superposition of coherent states.
LiouvilleResult liouville_check(double nu, int n,
                                std::span<const CSParams> components,
                                std::span<const std::complex<double>> amplitudes,
                                std::span<const PhasePoint> samples, double t,
                                int size);

}  // namespace acs
