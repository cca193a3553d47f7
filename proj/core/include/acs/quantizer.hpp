#pragma once

// Covariant integral quantization, verified numerically: matrix elements of
// A_f = int dq dp/(2 pi c0) f(q,p) |q,p><q,p| by adaptive phase-space
// quadrature, compared against the closed-form targets
//   A_{q^alpha} = (c_alpha/c0) x^alpha,   A_p = (c1/c0) p,
//   A_{qp} = (c2/c0) d,   A_{p^2} = (c2/c0){p^2 + [K/c2 - 3/2] x^-2}.
// The coherent states here are V_{q,p} psi0 for a caller-chosen fiducial.

#include <Eigen/Dense>
#include <utility>
#include <variant>

#include "acs/fiducial.hpp"
#include "acs/propagator.hpp"

namespace acs {

struct Symbol {
  enum class Kind { q_power, p_linear, d_symbol, p_squared };
  Kind kind = Kind::q_power;
  double alpha = 0.0;  // q_power exponent

  static Symbol q_power(double a) { return {Kind::q_power, a}; }
  static Symbol p_linear() { return {Kind::p_linear, 0.0}; }
  static Symbol d_symbol() { return {Kind::d_symbol, 0.0}; }
  static Symbol p_squared() { return {Kind::p_squared, 0.0}; }
};

// The quantization fiducial: an oscillator eigenvector or a sampled profile.
using FiducialVariant = std::variant<FiducialSpec, GridFiducial>;

double fiducial_value(const FiducialVariant& f, double x);
MomentValue fiducial_c_gamma(const FiducialVariant& f, double gamma);
DerivativeConstants fiducial_derivative_constants(const FiducialVariant& f);

struct QuantizeOptions {
  int inner_order = 128;
  double q_min = 0.05;
  double q_max = 25.0;
  double p_max = 60.0;
  double abs_tol = 1e-4;
  int max_panels = 24000;
};

struct QuantizeResult {
  Eigen::MatrixXcd matrix;          // Hermitian-symmetrized measurement
  double hermiticity_defect = 0.0;  // before symmetrization
  double quadrature_error = 0.0;
  double p_tail_bound = 0.0;
  bool converged = true;
};

// <Phi_i| A_f |Phi_j> in the given basis. Throws std::runtime_error when a
// required moment diverges (names the offending c_gamma).
QuantizeResult quantize_elements(const Symbol& symbol, const FiducialVariant& fid,
                                 const BasisSpec& basis,
                                 const QuantizeOptions& opt = {});

struct RatioResult {
  double ratio = 0.0;      // least-squares scalar against the target matrix
  double predicted = 0.0;  // c_alpha/c0 (or c1/c0, c2/c0)
  double residual = 0.0;   // relative Frobenius misfit
  QuantizeResult raw;
};

RatioResult verify_q_power(double alpha, const FiducialVariant& fid,
                           const BasisSpec& basis, const QuantizeOptions& opt = {});
RatioResult verify_p(const FiducialVariant& fid, const BasisSpec& basis,
                     const QuantizeOptions& opt = {});
RatioResult verify_d(const FiducialVariant& fid, const BasisSpec& basis,
                     const QuantizeOptions& opt = {});

struct P2FitResult {
  double kinetic_ratio = 0.0;        // coefficient of p^2
  double repulsive_coeff = 0.0;      // coefficient of x^-2
  double predicted_kinetic = 0.0;    // c2/c0
  double predicted_repulsive = 0.0;  // (c2/c0)(K/c2 - 3/2)
  double residual = 0.0;
  QuantizeResult raw;
};

P2FitResult verify_p2(const FiducialVariant& fid, const BasisSpec& basis,
                      const QuantizeOptions& opt = {});

// Both sides of K - (3/2) c2 = int [ y^2 phi'(y)^2 + phi(y)^2/2 ] dy with
// phi(y) = y psi0(1/y); the right side is manifestly positive.
std::pair<double, double> repulsive_positivity_identity(const FiducialVariant& fid);

}  // namespace acs
