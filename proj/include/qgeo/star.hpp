#pragma once

#include <vector>

#include "qgeo/metric.hpp"

namespace qgeo {

// Connection on the n-star (center 0, leaves 1..n) with per-leg unit phases
// s_k: metric g_{0->k} = legs[k-1], g_{k->0} = sqrt(n) * legs[k-1], and the
// hermitian torsion-free coefficients generated by
// Q_{0->k} = g_{k->0} / (s_k sqrt(n)), Q_{k->0} = g_{k->0} s_k / sqrt(n).
Connection star_connection(const std::vector<double>& legs,
                           const std::vector<cplx>& phases);

struct StarSolution {
  Connection connection;
  cplx phase;
};

// All star-compatible quantum Levi-Civita connections with one common phase:
// s = -sqrt(n)/2 +- i sqrt(4-n)/2 (the roots of s^2 + sqrt(n) s + 1 = 0 on
// the unit circle). Two solutions for n <= 3, one for n = 4, none for
// n >= 5. legs are the center-to-leaf weights g_{0->k} and must be positive;
// the leaf-to-center weights are fixed by the ratio g_{k->0} =
// sqrt(n) g_{0->k}.
std::vector<StarSolution> solve_star(int n, const std::vector<double>& legs);

// Second member of the two-leg family: on the 2-star a compatible connection
// may carry distinct unit phases (s1, s2) linked by the Moebius map
// s2 = -(s1 + sqrt(2)) / (sqrt(2) s1 + 1), which preserves the unit circle
// and has the common-phase solutions e^{+-3 i pi / 4} as fixed points.
cplx mobius_partner(cplx s1);

// Smallest star_compat_residual over `samples` common phases e^{i phi}
// sampled uniformly; strictly positive for n >= 5.
double star_phase_defect(int n, const std::vector<double>& legs, int samples);

// Reduced geodesic system on the 4-star. State: the four components
// X^{0<-i}; the leaf components are X^{i<-0} = -(mu_i/mu_0) conj(X^{0<-i}).
// mu has 5 entries (center first), lambda_out the four lambda_{0->i}.

// Driving force that keeps the flow inside the real fields:
// F^{0<-y} = 1/2 X^{0<-y} sum_i X^{i<-0} (1 - lambda_{0->y}/lambda_{0->i})
//   - 1/4 (mu_0/mu_y) sum_i X^{i<-0} X^{0<-i}
//   + (1 + mu_0/mu_y) X^{0<-y} X^{y<-0}.
std::vector<cplx> star4_driving_force(const std::vector<cplx>& X_in,
                                      const std::vector<double>& mu,
                                      const std::vector<double>& lambda_out);

// Returns -dX^{0<-y}/ds with the force above substituted:
// -Xdot^{0<-y} = 1/2 X^{0<-y} ( -X^{0<-y} + sum_i (mu_i/mu_0) X^{0<-i}
//   - sum_i conj(X^{0<-i}) (mu_i lambda_{0->y}) / (mu_0 lambda_{0->i})
//   + (2 mu_y/mu_0 - 1) conj(X^{0<-y}) )
//   + 1/4 sum_i (mu_i/mu_y) |X^{0<-i}|^2.
std::vector<cplx> star4_velocity_rhs(const std::vector<cplx>& X_in,
                                     const std::vector<double>& mu,
                                     const std::vector<double>& lambda_out);

// Closed form for the symmetric initial data X^{0<-1} = xi, X^{0<-i} =
// xi - 1 (i = 2,3,4), xi(0) = 1, on the uniform 4-star with mu = 1:
// xi(s) = (sqrt(3) tan(pi/6 - sqrt(3) s / 4) + 3) / 4, valid for
// s < 8 pi / (3 sqrt(3)) where the flow blows up.
double star4_xi_closed_form(double s);

double star4_blowup_time();

// Generator of the reduced amplitude flow for the same data, written as
// psi' = i H psi on the components (psi_0, psi_1, psi_leaf): H = -i M with
// M = [[0, xi, 3(xi-1)], [-xi, 0, 0], [1-xi, 0, 0]]. H is not hermitian but
// has real spectrum {0, +-sqrt(4 xi^2 - 6 xi + 3)}.
std::vector<cplx> star4_hamiltonian(double xi);

}  // namespace qgeo
