#pragma once

#include <vector>

#include "qgeo/geodesic.hpp"
#include "qgeo/metric.hpp"

namespace qgeo {

// Finite group given by its composition table, with a symmetric generating
// set (closed under inverses, identity excluded) whose Cayley graph is
// connected. Construction checks all of the group axioms.
struct GroupSpec {
  int order = 0;
  std::vector<int> table;       // table[a * order + b] = a compose b
  std::vector<int> generators;  // element ids
  int identity = 0;
  std::vector<int> inverse;     // per element

  int mul(int a, int b) const { return table[a * order + b]; }
  int inv(int a) const { return inverse[a]; }
};

GroupSpec make_group(int order, std::vector<int> table,
                     std::vector<int> generators);

// Z/nZ under addition with the given generators (default {1, n-1}).
GroupSpec cyclic_group(int n, std::vector<int> generators = {});

// Cayley graph of the group: vertex per element, arrow x -> x a per
// generator a, plus the lookups between arrows and (element, generator).
struct CayleyCalculus {
  GroupSpec group;
  DirectedGraph graph;
  std::vector<int> gen_of_arrow;  // arrow id -> generator slot
  std::vector<int> arrow_of;      // x * n_gen + slot -> arrow id
  std::vector<int> inv_gen;       // slot of the inverse generator

  int n_gen() const { return static_cast<int>(group.generators.size()); }
  int shift(int x, int slot) const {
    return group.mul(x, group.generators[slot]);
  }
};

CayleyCalculus cayley_graph(const GroupSpec& g);

// Left-invariant-basis metric: one weight function per generator,
// g[slot * order + x] is the weight of the arrow x -> x a.
struct CayleyMetric {
  std::vector<double> g;
};

CayleyMetric make_cayley_metric(const CayleyCalculus& c,
                                std::vector<double> weights);

// Connection coefficients in the group basis: nabla e^a =
// -sum Gamma^a_{bc} e^b (x) e^c with Xi^a_{bc} = Gamma^a_{bc} + delta_{a,b}.
// Functions on the group, indexed by three generator slots. The bimodule
// property forces Xi^a_{bc} = 0 unless a^{-1} b c lies in the generating
// set or is the identity; construction rejects coefficients off support.
struct XiCoeffs {
  int n_gen = 0;
  int order = 0;
  std::vector<cplx> xi;  // ((a * ng + b) * ng + c) * order + x

  cplx at(int a, int b, int c, int x) const {
    return xi[(static_cast<size_t>(a) * n_gen + b) * n_gen * order +
              static_cast<size_t>(c) * order + x];
  }
  cplx& at(int a, int b, int c, int x) {
    return xi[(static_cast<size_t>(a) * n_gen + b) * n_gen * order +
              static_cast<size_t>(c) * order + x];
  }
};

XiCoeffs make_xi(const CayleyCalculus& c, std::vector<cplx> values);
XiCoeffs zero_xi(const CayleyCalculus& c);

// Residual of metric compatibility in the group basis:
// h_b R_c(conj Xi^a_{c^{-1} b}) = Xi^b_{c a} R_c(h_a) for all a, b, c in the
// generating set, with h_a = 1 / R_a(g_{a^{-1}}).
double hermitian_check_cayley(const CayleyCalculus& c, const CayleyMetric& m,
                              const XiCoeffs& xi);

// sigma on a function-valued tensor T[(a * ng + b) * order + x]:
// out_{cd} = sum_{ab = cd} Xi^a_{cd} T_{ab} pointwise.
std::vector<cplx> sigma_cayley(const CayleyCalculus& c, const XiCoeffs& xi,
                               const std::vector<cplx>& t);

// Star compatibility: for all a, b and every factorisation r s = (a b)^{-1},
// sum_{cd = ab} R_{(ab)^{-1}}(conj Xi^a_{cd}) Xi^{d^{-1}}_{rs} =
// delta_{b^{-1}, r} delta_{a^{-1}, s}. Returns the largest deviation.
double star_compat_cayley(const CayleyCalculus& c, const XiCoeffs& xi);

// Torsion: realises sum_{cd = ab} Xi^a_{cd} e^c (x) e^d + e^a (x) e^b on
// the Cayley graph and projects to minimal 2-forms; max over a, b.
double torsion_check_cayley(const CayleyCalculus& c, const XiCoeffs& xi);

// Vector field in the group basis: X[slot * order + x] = X^a(x), equal to
// the graph component X^{x a <- x}.
VertexFunction div_int_cayley(const CayleyCalculus& c,
                              const std::vector<double>& mu,
                              const std::vector<cplx>& X);

// Geometric divergence: div(X) = sum_a X^{a^{-1}}
// - sum_{a,b} g_a R_a(X^{a^{-1}}) Xi^a_{b,b^{-1}} / R_b(g_{b^{-1}}).
VertexFunction div_cayley(const CayleyCalculus& c, const CayleyMetric& m,
                          const XiCoeffs& xi, const std::vector<cplx>& X);

// max_x |g_a sum_b Xi^a_{b,b^{-1}} / R_b(g_{b^{-1}}) - R_a(mu)/mu|; zero
// exactly when div_cayley agrees with div_int_cayley for every field.
double div_compat_residual_cayley(const CayleyCalculus& c,
                                  const CayleyMetric& m, const XiCoeffs& xi,
                                  const std::vector<double>& mu);

// Canonical antilinear star on fields:
// (X^*)^a = -conj(R_a(X^{a^{-1}})) g_a sum_b conj(Xi^a_{b,b^{-1}})
//   / R_b(g_{b^{-1}}).
std::vector<cplx> star_vf_cayley(const CayleyCalculus& c,
                                 const CayleyMetric& m, const XiCoeffs& xi,
                                 const std::vector<cplx>& X);

double reality_defect_cayley(const CayleyCalculus& c,
                             const std::vector<double>& mu,
                             const std::vector<cplx>& X);

// -2 dX^a/ds with the generated driving force already substituted:
// -2 Xdot^a = X^a sum_b (-X^b + R_{ab^{-1}}(X^b mu) / R_a(mu))
//   + sum_{b,d} Xi^a_{bd} R_b(X^d) X^b
//   - sum_{b,d} R_a(conj Xi^{a^{-1}}_{b^{-1} d^{-1}})
//     R_{ab^{-1}}(R_{d^{-1}}(X^d mu) X^b) / mu.
std::vector<cplx> velocity_rhs_cayley(const CayleyCalculus& c,
                                      const XiCoeffs& xi,
                                      const std::vector<double>& mu,
                                      const std::vector<cplx>& X);

// dpsi/ds = -sum_a (partial_a psi) X^a - psi div_int(X)/2; identical to the
// graph-basis amplitude flow under the basis dictionary.
VertexFunction amplitude_rhs_cayley(const CayleyCalculus& c,
                                    const std::vector<double>& mu,
                                    const std::vector<cplx>& X,
                                    const VertexFunction& psi);

// Dictionary to the graph engine: the square (x -> xa, xc -> xcd) receives
// L = Xi^a_{c,d}(x) R_a(g_{a^{-1}})(x) and the graph metric is
// g_{x -> xa} = g_a(x). Entries with b c = a land on graph triangles and
// become N = -Xi^a_{b,c}(x) R_a(g_{a^{-1}})(x); they vanish for the
// standard coefficient families, which have no identity part.
Connection to_graph_connection(const CayleyCalculus& c, const CayleyMetric& m,
                               const XiCoeffs& xi);

VectorField field_to_graph(const CayleyCalculus& c,
                           const std::vector<cplx>& X);

}  // namespace qgeo
