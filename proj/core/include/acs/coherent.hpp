#pragma once

// The coherent states |q,p; nu,n> on the half-line: wavefunctions,
// label-matching expectation values, overlaps, Husimi-type phase-space
// densities, and a numerical resolution-of-identity check over the
// half-plane.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "acs/fiducial.hpp"

namespace acs {

struct CSParams {
  double q;   // > 0
  double p;
  double nu;  // > 1/2
  int n;      // >= 0
  double xi;  // always xi_star(nu, n); derived, never user-set

  static CSParams make(double q, double p, double nu, int n);
  FiducialSpec fiducial() const { return FiducialSpec::with_scale(nu, n, xi); }
};

// Unit-modulus prefactor ((xi - i q p)/(xi + i q p))^((2n+nu+1)/2), evaluated
// as exp(-i (2n+nu+1) arctan(qp/xi)). The base never crosses the negative
// real axis, so the principal branch is single-valued along trajectories.
std::complex<double> phase_prefactor(const CSParams& params);

// <x|q,p;nu,n>; log-domain prefactors guard overflow at large nu.
std::complex<double> wavefunction(const CSParams& params, double x);

// <x^alpha> = c_{-alpha-2}(Phi_n) q^alpha; finite iff alpha > -2nu - 2.
MomentValue expectation_x_power(const CSParams& params, double alpha);

double expectation_p(const CSParams& params);   // = p
double expectation_d(const CSParams& params);   // = c_{-4} q p
double expectation_p2(const CSParams& params);  // = c_{-4} p^2 + C/q^2

// <H_nu> = [(2n+nu+1)/xi] H_sc(q,p) with H_sc = p^2 + xi^2/q^2.
double expectation_H(const CSParams& params);

// Parametric evolution: e^{-i H_nu t}|q,p;nu,n> = |Q_t,P_t;nu,n> with the
// labels advanced along the H_sc flow. The returned params are the exact
// Schroedinger evolute (verified against the spectral propagator).
CSParams evolve_cs(const CSParams& params, double t);

struct OverlapResult {
  std::complex<double> value;
  double error = 0.0;  // order-halving comparison
  bool converged = true;
};

// <a|b> by Gauss-Laguerre quadrature in the shared Gaussian-decay variable.
// Requires a.nu == b.nu; mixed n is allowed.
OverlapResult overlap(const CSParams& a, const CSParams& b, int order = 256);

// Closed form for |<q',p';nu,0|q,p;nu,0>|^2:
//   (2 xi)^(2nu+2) / [ xi^2 (q'/q + q/q')^2 + (q p' - q' p)^2 ]^(nu+1).
double overlap_n0_closed_form_sq(const CSParams& a, const CSParams& b);

// <params|psi> for an arbitrary state function, by adaptive quadrature.
OverlapResult overlap_with_state(
    const CSParams& params, const std::function<std::complex<double>(double)>& psi,
    double abs_tol = 1e-12, double rel_tol = 1e-10);

// c0(nu,n) = xi_{nu,n} G_n(0,nu), the measure normalization in the
// resolution of identity.
double c0_constant(double nu, int n);

// rho_psi(q,p) = |<q,p;nu,n|psi>|^2 / (2 pi c0(nu,n)); the standard
// phase-space portrait uses n = 0 analysis states.
double husimi_density(const CSParams& analysis, const CSParams& psi);
double husimi_density(const CSParams& analysis,
                      const std::function<std::complex<double>(double)>& psi);

struct IdentityCheckOptions {
  double q_min = 0.05;
  double q_max = 20.0;
  double p_max = 40.0;
  double abs_tol = 2e-4;
  int inner_order = 96;
  int max_panels = 24000;
};

struct IdentityCheckResult {
  Eigen::MatrixXcd gram;       // measured overlap integrals
  Eigen::MatrixXd residual;    // |gram - identity|
  double quadrature_error = 0.0;
  double p_tail_bound = 0.0;   // |p| > p_max contribution, O(p^-(2nu+1)) fit
  double q_window_defect = 0.0;
  bool converged = true;
  IdentityCheckOptions used;
};

// Gram matrix of int dq dp/(2 pi c0) <phi_i|q,p;nu,n><q,p;nu,n|phi_j>
// against the identity, for real test vectors phi_i.
IdentityCheckResult identity_check(
    double nu, int n, const std::vector<std::function<double(double)>>& testvecs,
    const IdentityCheckOptions& opt = {});

}  // namespace acs
