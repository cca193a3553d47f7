#pragma once

// SU(1,1) side of the construction: the 2x2 matrix image of the unitaries
// V_{q,p}, the reparametrized group law, left/right Cartan factorizations,
// the closed-form exponential map, and truncated discrete-series
// representations of the generators K0, K+, K-.

#include <Eigen/Dense>
#include <complex>
#include <utility>

namespace acs {

using cplx = std::complex<double>;

// Element [[alpha, beta], [conj(beta), conj(alpha)]] with
// |alpha|^2 - |beta|^2 = 1.
struct SU11Matrix {
  cplx alpha;
  cplx beta;

  Eigen::Matrix2cd full() const;
  // |alpha|^2 - |beta|^2 - 1
  double unit_defect() const;
};

SU11Matrix su11_from_full(const Eigen::Matrix2cd& m);

// Matrix image of V_{q,p}:
//   alpha = (q + 1/q)/2 + i p/q^2,
//   beta  = -i [ (q - 1/q)/2 - i p/q^2 ].
SU11Matrix v_matrix(double q, double p);

// The two factors whose product is v_matrix: the image of the squeeze-like
// exponential in p (nilpotent generator) and of the dilation in ln q.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> v_factor_matrices(double q,
                                                                double p);

struct GroupElement {
  double q;
  double p;
};

// (q,p) . (q',p') = (q q', q' p + p'/q); identity (1,0); inverse (1/q, -p).
GroupElement group_law(const GroupElement& a, const GroupElement& b);
GroupElement group_inverse(const GroupElement& a);

enum class CartanSide { left, right };

// m = p(zeta) h(theta)          (left)
// m = h(-theta) p(zeta')        (right)
// with p(z) = [[delta, delta z], [delta conj(z), delta]],
// delta = (1-|z|^2)^(-1/2), and the rotation factor carrying
// e^{i theta/2} = alpha/|alpha| on the entry matching alpha. theta is taken
// from the principal argument of alpha (doubled); reassembly does not
// depend on the branch.
struct CartanFactors {
  double theta;
  cplx zeta;        // left factor, |zeta| < 1
  cplx zeta_prime;  // right factor
  double delta;     // |alpha| = (1-|zeta|^2)^(-1/2)
  cplx xi_c;        // displacement parameter: zeta = -tanh|xi_c| e^{-i arg xi_c}
};

CartanFactors cartan(const SU11Matrix& m);
SU11Matrix cartan_reassemble(const CartanFactors& f, CartanSide side);

// exp of X = [[i lambda0/2, z/2], [conj(z)/2, -i lambda0/2]] in closed form
// through Delta = (|z|^2 - lambda0^2)/4: cosh/sinh branch for Delta > 0,
// cos/sin for Delta < 0, linear for Delta = 0.
SU11Matrix exp_su11(double lambda0, cplx z);

// Truncated discrete-series representation with Bargmann index
// eta = (nu+1)/2: K0 = diag(eta+k) and ladder entries
//   (K+)_{k+1,k} = -i sqrt((k+1)(k+2eta)),   K- = (K+)^dagger.
// The -i phase matches the concrete realization on the oscillator
// eigenbasis, where x^2 and H have real matrix elements. Truncation
// artifacts are confined to the last rows; algebra identities hold on the
// interior block.
struct AlgebraRep {
  int size;
  double nu;
  double eta;
  double omega_angle;  // free rotation angle; 0 throughout
  Eigen::MatrixXcd K0;
  Eigen::MatrixXcd Kp;
  Eigen::MatrixXcd Km;

  Eigen::MatrixXcd K1() const;  // i(K+ - K-)/2
  Eigen::MatrixXcd K2() const;  // (K+ + K-)/2
  Eigen::MatrixXcd casimir() const;  // K1^2 + K2^2 - K0^2
  // H = K0 + cos(w) K1 - sin(w) K2 and x^2/4 = K0 - cos(w) K1 + sin(w) K2.
  Eigen::MatrixXcd h_matrix() const;
  Eigen::MatrixXcd x2_over4_matrix() const;
};

AlgebraRep algebra_rep(double nu, int size, double omega_angle = 0.0);

}  // namespace acs
