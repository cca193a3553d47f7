#include "acs/propagator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "acs/specfun.hpp"

namespace acs {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

void check_basis(const BasisSpec& spec) {
  if (!(spec.nu > 0.5)) throw std::domain_error("BasisSpec: nu must exceed 1/2");
  if (!(spec.xi_ref > 0.0))
    throw std::domain_error("BasisSpec: xi_ref must be positive");
  if (spec.size < 8) throw std::domain_error("BasisSpec: size must be >= 8");
}
}  // namespace

Basis::Basis(const BasisSpec& spec, int quad_order) : spec_(spec) {
  check_basis(spec);
  quad_order_ = (quad_order > 0) ? quad_order : 2 * spec.size + 256;
  rule_ = gauss_laguerre_cached(quad_order_, spec.nu);

  const int M = quad_order_;
  x_nodes_.resize(M);
  meas_.resize(M);
  values_.resize(spec.size, M);
  std::vector<double> stack(spec.size);
  for (int j = 0; j < M; ++j) {
    const double u = rule_->nodes[j];
    x_nodes_[j] = std::sqrt(u / spec.xi_ref);
    meas_[j] = rule_->bare_weights[j] / (2.0 * std::sqrt(spec.xi_ref * u));
    weighted_laguerre_stack(spec.nu, u, stack);
    const double s = std::sqrt(2.0 * spec.xi_ref * x_nodes_[j]);
    for (int k = 0; k < spec.size; ++k) values_(k, j) = s * stack[k];
  }
}

void Basis::eval_stack(double x, std::span<double> out) const {
  if (static_cast<int>(out.size()) != spec_.size)
    throw std::domain_error("Basis::eval_stack: output size mismatch");
  if (!(x > 0.0)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  weighted_laguerre_stack(spec_.nu, spec_.xi_ref * x * x, out);
  const double s = std::sqrt(2.0 * spec_.xi_ref * x);
  for (auto& v : out) v *= s;
}

Eigen::VectorXcd Basis::project(
    const std::function<std::complex<double>(double)>& psi,
    double* deficit) const {
  const int M = quad_order_;
  Eigen::VectorXcd samples(M);
  for (int j = 0; j < M; ++j) samples[j] = psi(x_nodes_[j]) * meas_[j];
  Eigen::VectorXcd c = values_ * samples;
  if (deficit) *deficit = 1.0 - c.squaredNorm();
  return c;
}

Eigen::VectorXcd Basis::project_cs(const CSParams& cs, double* deficit) const {
  if (cs.nu != spec_.nu)
    throw std::domain_error("Basis::project_cs: nu mismatch");
  const int M = quad_order_;
  // Combined decay rate of Phi_k(xi_ref) * psi_cs in the x^2 variable.
  const double c_sub = 0.5 * (spec_.xi_ref + cs.xi / (cs.q * cs.q));
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(spec_.size);
  std::vector<double> stack(spec_.size);
  for (int j = 0; j < M; ++j) {
    const double u = rule_->nodes[j];
    const double x = std::sqrt(u / c_sub);
    const std::complex<double> w =
        wavefunction(cs, x) * rule_->bare_weights[j] /
        (2.0 * std::sqrt(c_sub * u));
    weighted_laguerre_stack(spec_.nu, spec_.xi_ref * x * x, stack);
    const double s = std::sqrt(2.0 * spec_.xi_ref * x);
    for (int k = 0; k < spec_.size; ++k) out[k] += s * stack[k] * w;
  }
  if (deficit) *deficit = 1.0 - out.squaredNorm();
  return out;
}

Eigen::MatrixXd Basis::x_power_matrix(double alpha) const {
  const double nu = spec_.nu, xi = spec_.xi_ref;
  if (!(nu + 0.5 * alpha > -1.0))
    throw std::domain_error("x_power_matrix: alpha too negative for this nu");
  const int N = spec_.size;
  const int M = N + 8;
  const auto rule = gauss_laguerre_cached(M, nu + 0.5 * alpha);
  Eigen::MatrixXd b(N, M);
  std::vector<double> stack(N);
  Eigen::VectorXd w(M);
  for (int j = 0; j < M; ++j) {
    const double u = rule->nodes[j];
    weighted_laguerre_stack(nu, u, stack);
    for (int k = 0; k < N; ++k) b(k, j) = stack[k];
    w[j] = rule->bare_weights[j] * std::pow(u, 0.5 * alpha);
  }
  return std::pow(xi, -0.5 * alpha) * (b * w.asDiagonal() * b.transpose());
}

Eigen::MatrixXd Basis::p2_matrix() const {
  // <j|p^2|k> = int Phi_j' Phi_k' dx; in u = xi x^2 the integrand is
  // xi [ b_j b_k/(4u) + (b_j b_k' + b_j' b_k) + 4 u b_j' b_k' ] du up to the
  // xi bookkeeping below, a u^(nu-1) e^-u polynomial kernel.
  const double nu = spec_.nu, xi = spec_.xi_ref;
  const int N = spec_.size;
  const int M = N + 8;
  const auto rule = gauss_laguerre_cached(M, nu - 1.0);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N, N);
  std::vector<double> b(N), db(N);
  for (int j = 0; j < M; ++j) {
    const double u = rule->nodes[j];
    weighted_laguerre_stack_deriv(nu, u, b, db);
    const double w = rule->bare_weights[j];
    for (int r = 0; r < N; ++r)
      for (int c = r; c < N; ++c) {
        const double h = 0.25 * b[r] * b[c] / u +
                         (b[r] * db[c] + db[r] * b[c]) +
                         4.0 * u * db[r] * db[c];
        out(r, c) += w * xi * h;
      }
  }
  out = out.selfadjointView<Eigen::Upper>();
  return out;
}

Eigen::MatrixXcd Basis::p_matrix() const {
  // <j|p|k> = -i int Phi_j Phi_k' dx; real antisymmetric integral.
  const double nu = spec_.nu, xi = spec_.xi_ref;
  const int N = spec_.size;
  const int M = N + 8;
  const auto rule = gauss_laguerre_cached(M, nu - 0.5);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  std::vector<double> b(N), db(N);
  for (int j = 0; j < M; ++j) {
    const double u = rule->nodes[j];
    weighted_laguerre_stack_deriv(nu, u, b, db);
    const double w = rule->bare_weights[j];
    const double pref = std::sqrt(xi / u);
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) {
        const double h = 0.5 * b[r] * b[c] + 2.0 * u * b[r] * db[c];
        a(r, c) += w * pref * h;
      }
  }
  return -kI * a;
}

Eigen::MatrixXcd Basis::d_matrix() const {
  // <j|d|k> = -i int Phi_j (x Phi_k' + Phi_k/2) dx
  //         = -i int [ b_j b_k + 2 u b_j b_k' ] du.
  const double nu = spec_.nu;
  const int N = spec_.size;
  const int M = N + 8;
  const auto rule = gauss_laguerre_cached(M, nu);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  std::vector<double> b(N), db(N);
  for (int j = 0; j < M; ++j) {
    const double u = rule->nodes[j];
    weighted_laguerre_stack_deriv(nu, u, b, db);
    const double w = rule->bare_weights[j];
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c)
        a(r, c) += w * (b[r] * b[c] + 2.0 * u * b[r] * db[c]);
  }
  return -kI * a;
}

Eigen::MatrixXd x2_matrix(const BasisSpec& spec) {
  check_basis(spec);
  const int N = spec.size;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
  for (int k = 0; k < N; ++k) {
    m(k, k) = (2.0 * k + spec.nu + 1.0) / spec.xi_ref;
    if (k + 1 < N) {
      const double off = -std::sqrt((k + 1.0) * (k + spec.nu + 1.0)) / spec.xi_ref;
      m(k, k + 1) = off;
      m(k + 1, k) = off;
    }
  }
  // Cross-check against quadrature on a bounded leading block.
  const int nv = std::min(N, 16);
  Basis probe({spec.nu, spec.xi_ref, nv});
  const Eigen::MatrixXd q = probe.x_power_matrix(2.0);
  const double diff = (q - m.topLeftCorner(nv, nv)).cwiseAbs().maxCoeff();
  if (diff > 1e-8) {
    std::ostringstream msg;
    msg << "x2_matrix: closed form disagrees with quadrature by " << diff;
    throw std::runtime_error(msg.str());
  }
  return m;
}

Eigen::MatrixXd hnu_matrix(const BasisSpec& spec) {
  check_basis(spec);
  Eigen::MatrixXd h = -spec.xi_ref * spec.xi_ref * x2_matrix(spec);
  for (int k = 0; k < spec.size; ++k)
    h(k, k) += 2.0 * spec.xi_ref * (2.0 * k + spec.nu + 1.0);
  return h;
}

Propagator::Propagator(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw std::domain_error("Propagator: square matrix required");
  const double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) throw std::domain_error("Propagator: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("Propagator: eigendecomposition failed");
  vectors_ = eig.eigenvectors();
  eigenvalues_ = eig.eigenvalues();
}

Eigen::VectorXcd Propagator::apply(const Eigen::VectorXcd& c, double t) const {
  if (c.size() != eigenvalues_.size())
    throw std::domain_error("Propagator::apply: dimension mismatch");
  Eigen::VectorXcd modes = vectors_.transpose() * c;
  for (Eigen::Index k = 0; k < modes.size(); ++k)
    modes[k] *= std::exp(-kI * (eigenvalues_[k] * t));
  return vectors_ * modes;
}

double adapted_basis_scale(std::span<const CSParams> states) {
  if (states.empty())
    throw std::domain_error("adapted_basis_scale: no states");
  double log_sum = 0.0;
  for (const auto& s : states) {
    const double opt = std::hypot(s.xi, s.q * s.p) / (s.q * s.q);
    log_sum += std::log(opt);
  }
  return std::exp(log_sum / static_cast<double>(states.size()));
}

FidelityReport fidelity_report(double nu, int n, const PhasePoint& p0,
                               std::span<const double> times, int size,
                               double stability_threshold,
                               double xi_ref_override) {
  if (size < 8) throw std::domain_error("fidelity_report: size must be >= 8");
  const double xi = xi_star(nu, n);

  std::vector<CSParams> states;
  states.push_back(CSParams::make(p0.q, p0.p, nu, n));
  std::vector<PhasePoint> targets;
  for (double t : times) {
    const PhasePoint pt = flow(p0, t, xi);
    targets.push_back(pt);
    states.push_back(CSParams::make(pt.q, pt.p, nu, n));
  }
  const double xi_ref = (xi_ref_override > 0.0)
                            ? xi_ref_override
                            : adapted_basis_scale(states);

  const int N2 = 2 * size;
  Basis basis({nu, xi_ref, N2});
  const Eigen::MatrixXd h2 = hnu_matrix(basis.spec());
  const Eigen::MatrixXd h1 = h2.topLeftCorner(size, size);
  Propagator prop2(h2), prop1(h1);

  double deficit0 = 0.0;
  const Eigen::VectorXcd c0 = basis.project_cs(states[0], &deficit0);

  FidelityReport rep;
  rep.size = size;
  rep.xi_ref = xi_ref;
  rep.stability_threshold = stability_threshold;

  for (size_t i = 0; i < times.size(); ++i) {
    double deficit_t = 0.0;
    const Eigen::VectorXcd ct = basis.project_cs(states[i + 1], &deficit_t);
    const Eigen::VectorXcd evolved2 = prop2.apply(c0, times[i]);
    const Eigen::VectorXcd evolved1 =
        prop1.apply(c0.head(size), times[i]);

    FidelityPoint pt;
    pt.t = times[i];
    pt.F = ct.head(size).dot(evolved1);  // Eigen dot conjugates the left side
    pt.F_check = ct.dot(evolved2);
    pt.deficit_initial = deficit0;
    pt.deficit_target = deficit_t;
    pt.stability_delta = std::abs(pt.F - pt.F_check);
    rep.converged = rep.converged && pt.stability_delta < stability_threshold;
    rep.points.push_back(pt);
  }
  return rep;
}

LiouvilleResult liouville_check(double nu, int n,
                                std::span<const CSParams> components,
                                std::span<const std::complex<double>> amplitudes,
                                std::span<const PhasePoint> samples, double t,
                                int size) {
  if (components.empty() || components.size() != amplitudes.size())
    throw std::domain_error("liouville_check: components/amplitudes mismatch");
  const double xi = xi_star(nu, n);

  std::vector<CSParams> all(components.begin(), components.end());
  std::vector<CSParams> analysis, transported;
  for (const auto& s : samples) {
    analysis.push_back(CSParams::make(s.q, s.p, nu, n));
    const PhasePoint back = flow({s.q, s.p}, -t, xi);
    transported.push_back(CSParams::make(back.q, back.p, nu, n));
    all.push_back(analysis.back());
    all.push_back(transported.back());
  }
  const double xi_ref = adapted_basis_scale(all);

  Basis basis({nu, xi_ref, size});
  Propagator prop(hnu_matrix(basis.spec()));

  Eigen::VectorXcd c_psi = Eigen::VectorXcd::Zero(size);
  double worst_deficit = 0.0;
  for (size_t i = 0; i < components.size(); ++i) {
    double d = 0.0;
    c_psi += amplitudes[i] * basis.project_cs(components[i], &d);
    worst_deficit = std::max(worst_deficit, std::abs(d));
  }
  c_psi.normalize();
  const Eigen::VectorXcd c_t = prop.apply(c_psi, t);

  LiouvilleResult res;
  res.deficit = worst_deficit;
  for (size_t i = 0; i < samples.size(); ++i) {
    const Eigen::VectorXcd ca = basis.project_cs(analysis[i]);
    const Eigen::VectorXcd cb = basis.project_cs(transported[i]);
    const std::complex<double> lhs = ca.dot(c_t);
    const std::complex<double> rhs = cb.dot(c_psi);
    res.residuals.push_back(std::abs(lhs - rhs));
    res.max_residual = std::max(res.max_residual, res.residuals.back());
  }
  res.converged = worst_deficit < 1e-6;
  return res;
}

}  // namespace acs
