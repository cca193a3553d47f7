#include "acs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "acs/fiducial.hpp"

namespace acs {

namespace {

void check_point(const PhasePoint& pt) {
  if (!(pt.q > 0.0))
    throw std::domain_error("PhasePoint: q must be positive");
}

}  // namespace

double h_sc_xi(const PhasePoint& pt, double xi) {
  check_point(pt);
  return pt.p * pt.p + xi * xi / (pt.q * pt.q);
}

double h_sc(const PhasePoint& pt, double nu, int n) {
  return h_sc_xi(pt, xi_star(nu, n));
}

PhasePoint flow(const PhasePoint& p0, double t, double xi) {
  check_point(p0);
  const double h = h_sc_xi(p0, xi);
  const double qp0 = p0.q * p0.p;
  const double q2 = p0.q * p0.q + 4.0 * qp0 * t + 4.0 * h * t * t;
  // q_t^2 >= xi^2/H > 0 for all t; clamp guards rounding at deep bounces.
  const double q = std::sqrt(std::max(q2, xi * xi / h));
  return {q, (qp0 + 2.0 * h * t) / q};
}

double turning_time(const PhasePoint& p0, double xi) {
  check_point(p0);
  return -p0.q * p0.p / (2.0 * h_sc_xi(p0, xi));
}

double q_min(const PhasePoint& p0, double xi) {
  check_point(p0);
  return xi / std::sqrt(h_sc_xi(p0, xi));
}

double phase(const PhasePoint& p0, double t, double nu, int n) {
  const double xi = xi_star(nu, n);
  const PhasePoint pt = flow(p0, t, xi);
  const double wt = omega_tilde(nu, n);
  return wt / (2.0 * xi) * std::atan(pt.q * pt.p / xi);
}

std::vector<TrajectorySample> sample_trajectory(const PhasePoint& p0, double nu,
                                                int n, double t0, double t1,
                                                int count) {
  if (count < 2) throw std::domain_error("sample_trajectory: count must be >= 2");
  const double xi = xi_star(nu, n);
  const double wt = omega_tilde(nu, n);

  std::vector<double> times(count);
  for (int i = 0; i < count; ++i)
    times[i] = t0 + (t1 - t0) * i / (count - 1);
  const double ts = turning_time(p0, xi);
  if (ts > t0 && ts < t1) {
    times.push_back(ts);
    std::sort(times.begin(), times.end());
  }

  std::vector<TrajectorySample> out;
  out.reserve(times.size());
  for (double t : times) {
    const PhasePoint pt = flow(p0, t, xi);
    out.push_back({t, pt, wt / (2.0 * xi) * std::atan(pt.q * pt.p / xi)});
  }
  return out;
}

}  // namespace acs
