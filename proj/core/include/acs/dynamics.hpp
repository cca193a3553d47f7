#pragma once

// Semiclassical dynamics on the half-plane: the Hamiltonian
// H_sc = p^2 + xi^2/q^2, its closed-form flow, and the dynamical phase
// phi(t) = (omega~/2 xi) arctan(q_t p_t / xi). Coherent-state labels evolve
// parametrically along this flow.

#include <vector>

namespace acs {

struct PhasePoint {
  double q;  // > 0
  double p;
};

// H_sc at a fixed scale xi.
double h_sc_xi(const PhasePoint& pt, double xi);

// H_sc^{(nu,n)} with xi = xi_star(nu, n).
double h_sc(const PhasePoint& pt, double nu, int n);

// Exact flow of H_sc: q_t^2 = q0^2 + 4 q0 p0 t + 4 H t^2,
// p_t = (q0 p0 + 2 H t)/q_t. Conserves H to rounding; q_t stays positive
// for every real t (the bounce).
PhasePoint flow(const PhasePoint& p0, double t, double xi);

// Turning time -q0 p0 / (2H) where q reaches its minimum xi/sqrt(H).
double turning_time(const PhasePoint& p0, double xi);
double q_min(const PhasePoint& p0, double xi);

// Dynamical phase at the flowed point. The arctan form has no free
// integration constant: the coherent-state definition absorbs exactly this
// phase, making e^{-iHt}|q,p> = |Q_t,P_t> hold with no extra factor.
// phi(0) != 0 unless q0 p0 = 0.
double phase(const PhasePoint& p0, double t, double nu, int n);

struct TrajectorySample {
  double t;
  PhasePoint point;
  double phi;
};

// Uniform sampling of a trajectory over [t0, t1]; when the turning time
// falls inside the window it is inserted as an extra sample so the emitted
// polyline contains the exact bounce.
std::vector<TrajectorySample> sample_trajectory(const PhasePoint& p0, double nu,
                                                int n, double t0, double t1,
                                                int count);

}  // namespace acs
