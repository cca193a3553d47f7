#include "acs/su11.hpp"

#include <cmath>
#include <stdexcept>

namespace acs {

namespace {
constexpr cplx kI{0.0, 1.0};
}

Eigen::Matrix2cd SU11Matrix::full() const {
  Eigen::Matrix2cd m;
  m << alpha, beta, std::conj(beta), std::conj(alpha);
  return m;
}

double SU11Matrix::unit_defect() const {
  return std::norm(alpha) - std::norm(beta) - 1.0;
}

SU11Matrix su11_from_full(const Eigen::Matrix2cd& m) {
  return {m(0, 0), m(0, 1)};
}

SU11Matrix v_matrix(double q, double p) {
  if (!(q > 0.0)) throw std::domain_error("v_matrix: q must be positive");
  const cplx alpha = 0.5 * (q + 1.0 / q) + kI * p / (q * q);
  const cplx beta = -kI * (0.5 * (q - 1.0 / q) - kI * p / (q * q));
  return {alpha, beta};
}

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> v_factor_matrices(double q,
                                                                double p) {
  if (!(q > 0.0)) throw std::domain_error("v_factor_matrices: q must be positive");
  const double r = p / q;
  Eigen::Matrix2cd mp;  // exp of the nilpotent 2p(K0-K1)/q generator
  mp << cplx(1.0, r), cplx(-r, 0.0), cplx(-r, 0.0), cplx(1.0, -r);
  const double ch = 0.5 * (q + 1.0 / q);
  const double sh = 0.5 * (q - 1.0 / q);
  Eigen::Matrix2cd mq;  // exp(-2i ln q K2)
  mq << cplx(ch, 0.0), cplx(0.0, -sh), cplx(0.0, sh), cplx(ch, 0.0);
  return {mp, mq};
}

GroupElement group_law(const GroupElement& a, const GroupElement& b) {
  if (!(a.q > 0.0) || !(b.q > 0.0))
    throw std::domain_error("group_law: q must be positive");
  return {a.q * b.q, b.q * a.p + b.p / a.q};
}

GroupElement group_inverse(const GroupElement& a) {
  if (!(a.q > 0.0)) throw std::domain_error("group_inverse: q must be positive");
  return {1.0 / a.q, -a.p};
}

CartanFactors cartan(const SU11Matrix& m) {
  const double mod = std::abs(m.alpha);
  CartanFactors f;
  f.delta = mod;
  f.theta = 2.0 * std::arg(m.alpha);
  f.zeta = m.beta / std::conj(m.alpha);
  f.zeta_prime = m.beta / m.alpha;
  // zeta = -tanh|xi| e^{-i arg xi}
  const double r = std::abs(f.zeta);
  const double mag = std::atanh(std::min(r, 1.0 - 1e-16));
  const double ang = (r > 0.0) ? -std::arg(-f.zeta) : 0.0;
  f.xi_c = mag * std::exp(kI * ang);
  return f;
}

SU11Matrix cartan_reassemble(const CartanFactors& f, CartanSide side) {
  const cplx z = (side == CartanSide::left) ? f.zeta : f.zeta_prime;
  Eigen::Matrix2cd disp;
  disp << f.delta, f.delta * z, f.delta * std::conj(z), f.delta;
  const cplx e = std::exp(kI * (0.5 * f.theta));
  Eigen::Matrix2cd rot;
  rot << e, cplx(0.0), cplx(0.0), std::conj(e);
  const Eigen::Matrix2cd m =
      (side == CartanSide::left) ? Eigen::Matrix2cd(disp * rot)
                                 : Eigen::Matrix2cd(rot * disp);
  return su11_from_full(m);
}

SU11Matrix exp_su11(double lambda0, cplx z) {
  const double delta = 0.25 * (std::norm(z) - lambda0 * lambda0);
  double c, s;  // cosh(sqrt(D)) and sinh(sqrt(D))/sqrt(D) or trig analogues
  if (delta > 1e-30) {
    const double r = std::sqrt(delta);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  } else if (delta < -1e-30) {
    const double r = std::sqrt(-delta);
    c = std::cos(r);
    s = std::sin(r) / r;
  } else {
    c = 1.0;
    s = 1.0;
  }
  return {c + s * kI * (0.5 * lambda0), s * 0.5 * z};
}

Eigen::MatrixXcd AlgebraRep::K1() const { return 0.5 * kI * (Kp - Km); }

Eigen::MatrixXcd AlgebraRep::K2() const { return 0.5 * (Kp + Km); }

Eigen::MatrixXcd AlgebraRep::casimir() const {
  const Eigen::MatrixXcd k1 = K1(), k2 = K2();
  return k1 * k1 + k2 * k2 - K0 * K0;
}

Eigen::MatrixXcd AlgebraRep::h_matrix() const {
  return K0 + std::cos(omega_angle) * K1() - std::sin(omega_angle) * K2();
}

Eigen::MatrixXcd AlgebraRep::x2_over4_matrix() const {
  return K0 - std::cos(omega_angle) * K1() + std::sin(omega_angle) * K2();
}

AlgebraRep algebra_rep(double nu, int size, double omega_angle) {
  if (!(nu > 0.5)) throw std::domain_error("algebra_rep: nu must exceed 1/2");
  if (size < 8) throw std::domain_error("algebra_rep: size must be >= 8");
  AlgebraRep rep;
  rep.size = size;
  rep.nu = nu;
  rep.eta = 0.5 * (nu + 1.0);
  rep.omega_angle = omega_angle;
  rep.K0 = Eigen::MatrixXcd::Zero(size, size);
  rep.Kp = Eigen::MatrixXcd::Zero(size, size);
  rep.Km = Eigen::MatrixXcd::Zero(size, size);
  for (int k = 0; k < size; ++k) rep.K0(k, k) = rep.eta + k;
  // The free angle rotates the ladder phases, K+(w) = e^{-iw} K+(0),
  // leaving H, x^2 and d fixed.
  const cplx rot = std::exp(-kI * omega_angle);
  for (int k = 0; k + 1 < size; ++k) {
    const cplx e = -kI * std::sqrt((k + 1.0) * (k + 2.0 * rep.eta)) * rot;
    rep.Kp(k + 1, k) = e;
    rep.Km(k, k + 1) = std::conj(e);
  }
  return rep;
}

}  // namespace acs
