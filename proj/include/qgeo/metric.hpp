#pragma once

#include <vector>

#include "qgeo/graph.hpp"

namespace qgeo {

// Edge weights g per arrow (nonzero reals, negatives allowed) together with
// the dual weights lambda[a] = 1 / g[reverse(a)]. Needs a bidirected graph.
struct GraphMetric {
  std::vector<double> g;
  std::vector<double> lambda;
  bool edge_symmetric = false;
};

GraphMetric make_metric(const DirectedGraph& g, std::vector<double> weights);

// Square configuration: arrows row = x->y and col = z->u such that the side
// arrows x->z and y->u exist. z = y or u = x are the degenerate cases; r = c
// is impossible because graphs carry no self-arrows.
struct SquareConfig {
  int row = -1;
  int col = -1;
  int side_src = -1;  // x -> z
  int side_dst = -1;  // y -> u
};

// Triangle configuration: arrows row = x->y and col = z->y sharing their
// target, with the side arrow x->z present (so z != x and z != y).
struct TriangleConfig {
  int row = -1;
  int col = -1;
  int side = -1;  // x -> z
};

struct ConfigTable {
  std::vector<SquareConfig> squares;
  std::vector<TriangleConfig> triangles;
  std::vector<int> square_id;    // n_arrows^2 lookup, -1 when absent
  std::vector<int> triangle_id;  // n_arrows^2 lookup, -1 when absent
  std::vector<std::vector<int>> squares_by_row;
  std::vector<std::vector<int>> squares_by_col;
  std::vector<std::vector<int>> triangles_by_row;
  std::vector<std::vector<int>> triangles_by_col;

  int square_index(int row, int col, int n_arrows) const {
    return square_id[row * n_arrows + col];
  }
  int triangle_index(int row, int col, int n_arrows) const {
    return triangle_id[row * n_arrows + col];
  }
};

ConfigTable enumerate_configs(const DirectedGraph& g);

// Left bimodule connection determined by a metric and per-configuration
// coefficients: sigma moves a basis 2-path (row, side_dst) of a square to
// (side_src, col) with weight lambda[row] * L, and alpha sends a basis
// one-form on `row` of a triangle to (side, col) with weight
// lambda[row] * N.
struct Connection {
  DirectedGraph graph;
  GraphMetric metric;
  ConfigTable configs;
  std::vector<cplx> L;  // one per square configuration
  std::vector<cplx> N;  // one per triangle configuration
};

Connection build_connection(const DirectedGraph& g, const GraphMetric& metric,
                            std::vector<cplx> L, std::vector<cplx> N);

TwoTensor sigma_apply(const Connection& c, const TwoTensor& t);
TwoTensor alpha_apply(const Connection& c, const OneForm& w);

// nabla(w) = theta (x) w - sigma(w (x) theta) + alpha(w).
TwoTensor nabla(const Connection& c, const OneForm& w);

// Compatibility of the coefficients with the hermitian inner product:
// max |L[r,c] - conj(L[c,r])| and |N[r,c] - conj(N[c,r])| over
// configurations, each scaled by |lambda_r lambda_c|.
double hermitian_residual(const Connection& c);

// Obstruction to hermitian torsion-free connections: on every nondegenerate
// square, g_{u->y} + g_{y->x} must equal g_{y->u} + g_{u->z}. Returns the
// largest violation (0 when there are no nondegenerate squares).
double square_metric_condition(const DirectedGraph& g,
                               const GraphMetric& metric);

// Hermitian torsion-free family: L[x->y, z->u] = Q_{u->y}
// + [u != x] g_{u->y} + [z != y] g_{y->x} with Q given per arrow, and
// N[x->y, z->y] = b_y with b given per vertex.
Connection torsion_free_from_Q(const DirectedGraph& g,
                               const GraphMetric& metric,
                               const std::vector<cplx>& Q,
                               const std::vector<double>& b);

// Deviation of sigma-dagger-sigma-dagger from the identity, evaluated on
// basis 2-paths: for each input (x->y, y->u) and output intermediate v,
// | sum_z lambda_{u->y} lambda_{x->z} conj(L[u->y, z->x]) L[x->z, v->u]
//   - delta_{v,y} |.
double star_compat_residual(const Connection& c);

// Residual of the coefficient relation characterising star-preserving
// connections (given star-compatibility): for each arrow x->y and each
// triangle partner v of y->x,
// | N[y->x, v->x] + lambda_{x->y} sum_z conj(N[x->y, z->y]) lambda_{y->z}
//   L[y->z, v->x] |.
double star_preserving_residual(const Connection& c);

// Direct operator check of the same property: max over basis arrows of
// | sigma(dagger(nabla(w_a^*))) - nabla(w_a) |.
double star_preserving_direct(const Connection& c);

struct QlcResidual {
  double metric = 0.0;
  double torsion = 0.0;
  double star = 0.0;
};

// metric: max coefficient of nabla(g2) = (nabla (x) id + (sigma (x) id)
// (id (x) nabla)) applied to sum_a g_a w_a (x) w_{rev(a)}, on length-3
// paths. torsion: max over basis arrows of |wedge(nabla w_a) -
// wedge(theta (x) w_a + w_a (x) theta)|. star: the star-preserving
// coefficient relation above.
QlcResidual qlc_residual(const Connection& c);

// Worst self-adjointness defect together with the configuration that attains
// it; exactly one of `square`/`triangle` is set when the residual is nonzero.
struct WorstConfig {
  double residual = 0.0;
  int square = -1;
  int triangle = -1;
};
WorstConfig hermitian_worst(const Connection& c);

}  // namespace qgeo
