#pragma once

#include <string>
#include <vector>

#include "qgeo/cayley.hpp"
#include "qgeo/geodesic.hpp"
#include "qgeo/graph.hpp"

namespace qgeo {

// Cyclic lattice with generators +1/-1. All site arrays are periodic; the
// ratio arrays are the primary data so that a "flat" lattice (constant ratio)
// can wrap around the seam even though no single-valued exponential metric
// exists on the cycle.
struct LatticeOps {
  int n = 0;
  std::vector<double> rho_plus;   // rho_plus[i]  = g(i+1)/g(i)
  std::vector<double> rho_minus;  // rho_minus[i] = g(i-2)/g(i-1)
  std::vector<double> mu_plus;    // mu_plus[i]   = mu(i+1)/mu(i)
  std::vector<double> mu_minus;   // mu_minus[i]  = mu(i-1)/mu(i)
  std::vector<double> g;          // reference edge weights, g[i] on edge i,i+1
  std::vector<double> mu;         // reference measure
  bool flat = false;
  double rho = 1.0;  // constant ratio when flat

  int wrap(int i) const {
    int r = i % n;
    return r < 0 ? r + n : r;
  }
};

// Builds ratio arrays from a genuinely periodic edge-weight profile g[i]
// (weight of the undirected edge i,i+1) and a positive site measure.
LatticeOps lattice_from_metric(const std::vector<double>& g,
                               const std::vector<double>& mu);

// Constant-ratio lattice: every ratio array is constant and wraps
// periodically. g and mu hold the reference profile rho^i, which is only
// meaningful away from the seam between site n-1 and site 0.
LatticeOps lattice_flat(int n, double rho);

// Default dip profile: weight 1 far from the dip, smooth cosine-windowed
// Gaussian dip with floor 0.2 at site 50, exactly 1 at the opposite point.
std::vector<double> cosine_dip_metric(int n);

// Group calculus of the cyclic lattice: Z_n with generators {+1, -1}
// (slot 0 = +1, slot 1 = -1).
CayleyCalculus z_calculus(int n);

// Generator-indexed edge weights of the lattice as a group metric:
// g_+(i) = g[i], g_-(i) = g[i-1]. Meaningful when g is genuinely periodic.
CayleyMetric z_metric(const CayleyCalculus& c, const LatticeOps& lat);

// The lattice connection coefficients: Xi^+_{++} = rho_+, Xi^+_{-+} = 1,
// Xi^-_{--} = rho_-, Xi^-_{+-} = 1, all others zero.
XiCoeffs qlc_z(const LatticeOps& lat);

// Velocity equation on the lattice. X is packed slot-major: X[0*n+i] is the
// +1 component at site i, X[1*n+i] the -1 component. Returns twice the time
// derivative of X, so it equals the negative of velocity_rhs_cayley on the
// same data.
std::vector<cplx> velocity_rhs_z(const LatticeOps& lat,
                                 const std::vector<cplx>& X);

// Reduction of the velocity equation to a real +1 component when the measure
// is uniform (mu_plus = mu_minus = 1) and the -1 component is determined by
// the reality condition X^-(i) = -X^+(i-1). Returns dX^+/ds.
std::vector<double> velocity_rhs_real(const LatticeOps& lat,
                                      const std::vector<double>& xp);

// Same reduction on a constant-ratio lattice with mu = g, where reality gives
// X^-(i) = -X^+(i-1)/rho. Returns dX^+/ds.
std::vector<double> velocity_rhs_flat(const LatticeOps& lat,
                                      const std::vector<double>& xp);

// Interior divergence on the lattice (matches div_int_cayley).
std::vector<cplx> div_z(const LatticeOps& lat, const std::vector<cplx>& X);

// Amplitude transport dpsi/ds for a packed complex field.
std::vector<cplx> amplitude_rhs_z(const LatticeOps& lat,
                                  const std::vector<cplx>& X,
                                  const std::vector<cplx>& psi);

// Reduced amplitude transport for the real uniform-measure slice:
// dpsi_i/ds = -psi_{i+1} X^+(i) + psi_{i-1} X^+(i-1).
std::vector<cplx> amplitude_rhs_real(const LatticeOps& lat,
                                     const std::vector<double>& xp,
                                     const std::vector<cplx>& psi);

// Reduced amplitude transport for the flat slice:
// dpsi_i/ds = -psi_{i+1} X^+(i) + psi_{i-1} X^+(i-1)/rho.
std::vector<cplx> amplitude_rhs_flat(const LatticeOps& lat,
                                     const std::vector<double>& xp,
                                     const std::vector<cplx>& psi);

// Max deviation from the lattice reality condition
// conj(X^a(i)) = -X^{a^{-1}}(i+a) mu(i+a)/mu(i).
double reality_defect_z(const LatticeOps& lat, const std::vector<cplx>& X);

// Number of sign alternations in the forward difference of xp; differences
// with magnitude at most eps are ignored.
int sign_alternations(const std::vector<double>& xp, double eps = 1e-9);

// Weighted amplitude mass sum_i w_i |psi_i|^2 over the band of sites within
// `band` of the seam between site n-1 and site 0.
double seam_mass(const std::vector<double>& weights,
                 const std::vector<cplx>& psi, int band = 10);

enum class LatticeMode { general, real, flat };

struct LatticeScenario {
  std::string name;
  LatticeOps lattice;
  LatticeMode mode = LatticeMode::general;
  std::vector<double> weights;  // mass weights per site
  std::vector<cplx> x0;         // packed 2n initial field
  std::vector<cplx> psi0;       // size n, normalized against weights
  double ds = 1e-3;
  long steps = 0;
  int record_stride = 1;
  double blowup_cap = 1e6;
};

// Gaussian field and amplitude packets aimed at the cosine dip. Uniform
// measure; evolves with the general complex stencil by default.
LatticeScenario cosine_dip_scenario(int n = 128, double x_center = 40.0,
                                    double psi_center = 40.0,
                                    double width = 5.0,
                                    double amplitude = 0.5, double ds = 1e-3,
                                    long steps = 48000, int record_stride = 100);

// Gaussian packets on a constant-ratio lattice with measure weights rho^i.
LatticeScenario exponential_scenario(int n, double rho, double x_center = 40.0,
                                     double psi_center = 40.0,
                                     double width = 5.0,
                                     double amplitude = 0.05, double ds = 1e-3,
                                     long steps = 2500, int record_stride = 25);

struct LatticeRunResult {
  std::vector<TrajectoryRow> rows;
  EvolveStatus status = EvolveStatus::ok;
  double s_end = 0.0;
  long steps_done = 0;
  std::string message;
  double max_mass_drift = 0.0;  // max |mass(s) - mass(0)|
  double max_imag_xplus = 0.0;  // max |Im X^+| seen at recorded rows
  double max_seam_mass = 0.0;   // max seam-band mass at recorded rows
};

// Fixed-step fourth-order integration of the scenario. Rows carry the packed
// field (the -1 component is reconstructed from reality in the reduced
// modes), the amplitude, the weighted mass, and the reality defect.
LatticeRunResult evolve_lattice(const LatticeScenario& sc);

}  // namespace qgeo
