#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgeo/cayley.hpp"
#include "qgeo/geodesic.hpp"
#include "qgeo/graph.hpp"
#include "qgeo/lattice.hpp"
#include "qgeo/metric.hpp"

namespace qgeo {

using json = nlohmann::json;

// Complex values are serialized as [re, im]; a bare number is accepted on
// input and means a real value.
json cplx_to_json(const cplx& z);
cplx cplx_from_json(const json& j);

// Graph: {"n": vertices, "arrows": [[src, dst], ...]}. Serialization uses the
// canonical source-major arrow order, and every vector keyed by arrows or
// configurations follows that order.
json graph_to_json(const DirectedGraph& g);
DirectedGraph graph_from_json(const json& j);

// Metric: {"g": [...]} in canonical arrow order.
json metric_to_json(const GraphMetric& m);
GraphMetric metric_from_json(const DirectedGraph& g, const json& j);

// Connection: {"graph": ..., "metric": ..., "L": [[re,im],...],
// "N": [[re,im],...]} with L/N in configuration-table order.
json connection_to_json(const Connection& c);
Connection connection_from_json(const json& j);

// Group: either {"order": n, "table": [[...], ...], "generators": [...]} with
// a full composition table (flat or row-nested), or the shortcut
// {"cyclic": n, "generators": [1, -1]} where negative generators are
// normalized mod n.
json group_to_json(const GroupSpec& g);
GroupSpec group_from_json(const json& j);

// Nonzero connection coefficients of a group calculus plus its residual
// block (self-adjointness, star compatibility, torsion, divergence
// compatibility against the given measure).
json xi_report(const CayleyCalculus& c, const CayleyMetric& m,
               const XiCoeffs& xi, const std::vector<double>& mu);

// Column labels: arrows as "src->dst" in canonical order, vertices as plain
// indices. The lattice variant labels the packed slot-major layout.
std::vector<std::string> arrow_labels(const DirectedGraph& g);
std::vector<std::string> vertex_labels(int n);
std::vector<std::string> lattice_arrow_labels(int n);

// CSV rows with header
// s,X_re[<arrow>],X_im[<arrow>],...,psi_re[<v>],psi_im[<v>],...,
// prob_mass,reality_defect; every number is printed with %.17g so repeated
// runs are byte-identical.
void write_trajectory_csv(std::ostream& os,
                          const std::vector<TrajectoryRow>& rows,
                          const std::vector<std::string>& arrows,
                          const std::vector<std::string>& vertices);

// One parsed geodesic scenario. "cosine_dip" and "exponential" build lattice
// runs; "star4" builds the uniform four-leg star example on the generic
// engine; "graph" (or a bare {"connection": ...} object) runs an explicit
// connection.
struct ScenarioConfig {
  enum class Kind { lattice, star4, graph };
  Kind kind = Kind::graph;
  std::string name;
  LatticeScenario lattice;
  std::optional<Connection> connection;
  Measure mu;
  VectorField x0;
  VertexFunction psi0;
  EvolveOptions opts;
};

ScenarioConfig scenario_from_json(const json& j);

}  // namespace qgeo
