#pragma once

#include <string>
#include <vector>

#include "qgeo/metric.hpp"

namespace qgeo {

// Vector field: coef[a] is the component X^{y<-x} dual to the arrow
// a = x -> y (the basis field paired with the one-form on that arrow).
struct VectorField {
  std::vector<cplx> coef;
};

// Vertex measure. Entries must be finite and nonzero; negative entries are
// allowed and flip `positive` so downstream mass reports can warn.
struct Measure {
  std::vector<double> mu;
  bool positive = true;
};

Measure make_measure(const DirectedGraph& g, std::vector<double> mu);

// Output of the field connection: coefficient on (basis field of arrow b,
// one-form of arrow c), nonzero only when b and c share their source.
// Stored dense as coef[b * n_arrows + c].
struct VectorFieldGradient {
  std::vector<cplx> coef;
};

// Left-module covariant derivative of a vector field. On a basis field of
// the arrow z -> y:
//   - sum_{s: z->s} chi_{y<-z} (x) w_{z->s}
//   + sum_{squares (s->r, z->y)} lambda_{s->r} L chi_{r<-s} (x) w_{s->z}
//   - sum_{triangles (s->y, z->y)} lambda_{s->y} N chi_{y<-s} (x) w_{s->z}.
VectorFieldGradient nabla_X_vf(const Connection& c, const VectorField& X);

// Convective derivative: contract the one-form slot of nabla_X_vf(X)
// against X itself.
VectorField convective(const Connection& c, const VectorField& X);

// Integration-by-parts divergence:
// div(X)(x) = sum_{x->y} X^{y<-x} - sum_{y->x} (mu_y/mu_x) X^{x<-y}.
VertexFunction div_int(const DirectedGraph& g, const Measure& mu,
                       const VectorField& X);

// How far X is from being real with respect to mu: max over arrows x -> y
// of |conj(X^{y<-x}) + (mu_y/mu_x) X^{x<-y}|.
double reality_defect(const DirectedGraph& g, const Measure& mu,
                      const VectorField& X);

// Divergence defined through the connection: pair nabla applied to the
// one-form corresponding to X under the metric isomorphism (coefficient
// -g_{x->y} X^{x<-y} on the arrow x -> y), using the hermitian pairing on
// closed 2-paths.
VertexFunction div_geometric(const Connection& c, const VectorField& X);

// Residual of the condition making div_geometric equal to div_int:
// sum_{z: p->z} L[p->q, z->p] lambda_{p->z} = (mu_q/mu_p)
// (lambda_{q->p}/lambda_{p->q}) for every arrow p -> q.
double div_compat_residual(const Connection& c, const Measure& mu);

// Canonical antilinear star on vector fields,
// (X^*)^{q<-p} = -conj(X^{p<-q}) (lambda_{p->q}/lambda_{q->p})
//   sum_{z: p->z} lambda_{p->z} L[z->p, p->q],
// which reduces to the mu-transport when the divergence compatibility
// holds; rejected otherwise because the formula is then not an involution.
VectorField star_vf(const Connection& c, const Measure& mu,
                    const VectorField& X, double tol = 1e-10);

// -dX/ds of the geodesic velocity equation, component on the arrow y -> x:
// X^{x<-y} (div(y) - div(x)) / 2 + [convective] + F^{x<-y}, written out as
// the standalone stencil (see velocity bracket in the implementation).
VectorField velocity_rhs(const Connection& c, const Measure& mu,
                         const VectorField& X, const VectorField& F);

// Driving force that keeps real fields real: with B the force-free value of
// velocity_rhs, F = -(B + transport(conj B))/2 where transport moves the
// reversed conjugate component with the measure ratio. Requires X real.
VectorField driving_force(const Connection& c, const Measure& mu,
                          const VectorField& X, double tol = 1e-8);

// dpsi/ds = -psi div(X)/2 - sum_{x->p} (psi_p - psi_x) X^{p<-x}.
VertexFunction amplitude_rhs(const DirectedGraph& g, const Measure& mu,
                             const VectorField& X, const VertexFunction& psi);

double prob_mass(const Measure& mu, const VertexFunction& psi);

enum class ForceMode { generated, zero };

struct EvolveOptions {
  double ds = 1e-3;
  long steps = 0;
  ForceMode force_mode = ForceMode::generated;
  int record_stride = 1;
  double blowup_cap = 1e6;
  bool allow_complex = false;
  double reality_tol = 1e-6;
};

enum class EvolveStatus { ok, blowup, reality_loss };

struct TrajectoryRow {
  double s = 0.0;
  VectorField X;
  VertexFunction psi;
  double prob_mass = 0.0;
  double reality_defect = 0.0;
};

struct EvolveResult {
  std::vector<TrajectoryRow> rows;
  EvolveStatus status = EvolveStatus::ok;
  double s_end = 0.0;
  long steps_done = 0;
  std::string message;
};

// Classical fourth-order Runge-Kutta with fixed step on the coupled state
// (X, psi). In generated mode the driving force is recomputed at every
// stage. Stops early on blowup (|X| above the cap, or non-finite values)
// and, unless allow_complex is set, when the reality defect exceeds
// reality_tol.
EvolveResult evolve(const Connection& c, const Measure& mu,
                    const VectorField& X0, const VertexFunction& psi0,
                    const EvolveOptions& opts);

}  // namespace qgeo
