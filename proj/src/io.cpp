#include "qgeo/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "qgeo/star.hpp"

namespace qgeo {

json cplx_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2)
    return cplx(j[0].get<double>(), j[1].get<double>());
  throw std::invalid_argument("complex value must be a number or [re, im]");
}

static std::vector<cplx> cplx_vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected an array");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (const json& e : j) out.push_back(cplx_from_json(e));
  return out;
}

static json cplx_vector_to_json(const std::vector<cplx>& v) {
  json out = json::array();
  for (const cplx& z : v) out.push_back(cplx_to_json(z));
  return out;
}

json graph_to_json(const DirectedGraph& g) {
  json arrows = json::array();
  for (int a = 0; a < g.n_arrows(); ++a)
    arrows.push_back(json::array({g.arrow(a).src, g.arrow(a).dst}));
  return json{{"n", g.n_vertices()}, {"arrows", std::move(arrows)}};
}

DirectedGraph graph_from_json(const json& j) {
  int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> arrows;
  for (const json& e : j.at("arrows")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("arrow must be [src, dst]");
    arrows.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return DirectedGraph(n, std::move(arrows));
}

json metric_to_json(const GraphMetric& m) { return json{{"g", m.g}}; }

GraphMetric metric_from_json(const DirectedGraph& g, const json& j) {
  std::vector<double> w = j.at("g").get<std::vector<double>>();
  return make_metric(g, std::move(w));
}

json connection_to_json(const Connection& c) {
  return json{{"graph", graph_to_json(c.graph)},
              {"metric", metric_to_json(c.metric)},
              {"L", cplx_vector_to_json(c.L)},
              {"N", cplx_vector_to_json(c.N)}};
}

Connection connection_from_json(const json& j) {
  DirectedGraph g = graph_from_json(j.at("graph"));
  GraphMetric m = metric_from_json(g, j.at("metric"));
  std::vector<cplx> L = cplx_vector_from_json(j.at("L"));
  std::vector<cplx> N = j.contains("N") ? cplx_vector_from_json(j.at("N"))
                                        : std::vector<cplx>();
  if (!j.contains("N")) {
    ConfigTable t = enumerate_configs(g);
    N.assign(t.triangles.size(), 0.0);
  }
  return build_connection(g, m, std::move(L), std::move(N));
}

json group_to_json(const GroupSpec& g) {
  json table = json::array();
  for (int a = 0; a < g.order; ++a) {
    json row = json::array();
    for (int b = 0; b < g.order; ++b) row.push_back(g.mul(a, b));
    table.push_back(std::move(row));
  }
  return json{{"order", g.order},
              {"table", std::move(table)},
              {"generators", g.generators}};
}

GroupSpec group_from_json(const json& j) {
  if (j.contains("cyclic")) {
    int n = j.at("cyclic").get<int>();
    if (n < 3) throw std::invalid_argument("cyclic order must be at least 3");
    std::vector<int> gens;
    if (j.contains("generators")) {
      for (const json& e : j.at("generators")) {
        long v = e.get<long>();
        int norm = static_cast<int>(((v % n) + n) % n);
        gens.push_back(norm);
      }
    }
    return cyclic_group(n, std::move(gens));
  }
  int order = j.at("order").get<int>();
  std::vector<int> table;
  const json& t = j.at("table");
  if (t.is_array() && !t.empty() && t[0].is_array()) {
    for (const json& row : t)
      for (const json& e : row) table.push_back(e.get<int>());
  } else {
    table = t.get<std::vector<int>>();
  }
  std::vector<int> gens = j.at("generators").get<std::vector<int>>();
  return make_group(order, std::move(table), std::move(gens));
}

json xi_report(const CayleyCalculus& c, const CayleyMetric& m,
               const XiCoeffs& xi, const std::vector<double>& mu) {
  const int ng = c.n_gen();
  json entries = json::array();
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < ng; ++b)
      for (int d = 0; d < ng; ++d)
        for (int x = 0; x < c.group.order; ++x) {
          cplx v = xi.at(a, b, d, x);
          if (v == cplx(0.0)) continue;
          entries.push_back(json{{"upper", c.group.generators[a]},
                                 {"lower", json::array(
                                      {c.group.generators[b],
                                       c.group.generators[d]})},
                                 {"site", x},
                                 {"value", cplx_to_json(v)}});
        }
  json residuals{{"hermitian", hermitian_check_cayley(c, m, xi)},
                 {"star_compat", star_compat_cayley(c, xi)},
                 {"torsion", torsion_check_cayley(c, xi)},
                 {"div_compat", div_compat_residual_cayley(c, m, xi, mu)}};
  return json{{"order", c.group.order},
              {"generators", c.group.generators},
              {"xi", std::move(entries)},
              {"residuals", std::move(residuals)}};
}

std::vector<std::string> arrow_labels(const DirectedGraph& g) {
  std::vector<std::string> out;
  out.reserve(g.n_arrows());
  for (int a = 0; a < g.n_arrows(); ++a)
    out.push_back(std::to_string(g.arrow(a).src) + "->" +
                  std::to_string(g.arrow(a).dst));
  return out;
}

std::vector<std::string> vertex_labels(int n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (int v = 0; v < n; ++v) out.push_back(std::to_string(v));
  return out;
}

std::vector<std::string> lattice_arrow_labels(int n) {
  std::vector<std::string> out;
  out.reserve(2 * n);
  for (int i = 0; i < n; ++i)
    out.push_back(std::to_string(i) + "->" + std::to_string((i + 1) % n));
  for (int i = 0; i < n; ++i)
    out.push_back(std::to_string(i) + "->" + std::to_string((i + n - 1) % n));
  return out;
}

static std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os,
                          const std::vector<TrajectoryRow>& rows,
                          const std::vector<std::string>& arrows,
                          const std::vector<std::string>& vertices) {
  os << "s";
  for (const std::string& a : arrows) os << ",X_re[" << a << "],X_im[" << a << "]";
  for (const std::string& v : vertices)
    os << ",psi_re[" << v << "],psi_im[" << v << "]";
  os << ",prob_mass,reality_defect\n";
  for (const TrajectoryRow& row : rows) {
    if (row.X.coef.size() != arrows.size() || row.psi.size() != vertices.size())
      throw std::invalid_argument("trajectory row does not match labels");
    os << fmt(row.s);
    for (const cplx& z : row.X.coef)
      os << ',' << fmt(z.real()) << ',' << fmt(z.imag());
    for (const cplx& z : row.psi)
      os << ',' << fmt(z.real()) << ',' << fmt(z.imag());
    os << ',' << fmt(row.prob_mass) << ',' << fmt(row.reality_defect) << '\n';
  }
}

static ForceMode force_mode_from_string(const std::string& s) {
  if (s == "generated") return ForceMode::generated;
  if (s == "zero") return ForceMode::zero;
  throw std::invalid_argument("force mode must be 'generated' or 'zero'");
}

static LatticeMode lattice_mode_from_string(const std::string& s) {
  if (s == "general") return LatticeMode::general;
  if (s == "real") return LatticeMode::real;
  if (s == "flat") return LatticeMode::flat;
  throw std::invalid_argument("mode must be 'general', 'real' or 'flat'");
}

static EvolveOptions opts_from_json(const json& j) {
  EvolveOptions opts;
  opts.ds = j.value("ds", 1e-3);
  opts.steps = j.value("steps", 0L);
  opts.record_stride = j.value("record_stride", 1);
  opts.blowup_cap = j.value("blowup_cap", 1e6);
  opts.allow_complex = j.value("allow_complex", false);
  opts.reality_tol = j.value("reality_tol", 1e-6);
  if (j.contains("force_mode"))
    opts.force_mode = force_mode_from_string(j.at("force_mode").get<std::string>());
  return opts;
}

static ScenarioConfig star4_scenario(const json& j) {
  ScenarioConfig sc;
  sc.kind = ScenarioConfig::Kind::star4;
  sc.name = "star4";
  std::vector<double> legs =
      j.value("legs", std::vector<double>{1.0, 1.0, 1.0, 1.0});
  std::vector<StarSolution> sols = solve_star(4, legs);
  if (sols.empty())
    throw std::invalid_argument("four-leg star admits no compatible phase");
  sc.connection = std::move(sols.front().connection);
  const DirectedGraph& g = sc.connection->graph;
  sc.mu = make_measure(g, std::vector<double>(g.n_vertices(), 1.0));
  cplx xi0 = j.contains("xi0") ? cplx_from_json(j.at("xi0")) : cplx(1.0);
  sc.x0.coef.assign(g.n_arrows(), 0.0);
  sc.x0.coef[g.arrow_index(1, 0)] = xi0;
  sc.x0.coef[g.arrow_index(0, 1)] = -std::conj(xi0);
  for (int k = 2; k <= 4; ++k) {
    sc.x0.coef[g.arrow_index(k, 0)] = xi0 - 1.0;
    sc.x0.coef[g.arrow_index(0, k)] = -std::conj(xi0 - 1.0);
  }
  sc.psi0.assign(g.n_vertices(), 1.0 / std::sqrt(5.0));
  sc.opts = opts_from_json(j);
  return sc;
}

ScenarioConfig scenario_from_json(const json& j) {
  std::string name = j.value("scenario", std::string());
  if (name.empty() && j.contains("connection")) name = "graph";
  if (name == "star4") return star4_scenario(j);

  if (name == "cosine_dip" || name == "exponential") {
    ScenarioConfig sc;
    sc.kind = ScenarioConfig::Kind::lattice;
    sc.name = name;
    int n = j.value("N", 128);
    double width = j.value("width", 5.0);
    double xc = j.value("x_center", 40.0);
    double pc = j.value("psi_center", 40.0);
    double ds = j.value("ds", 1e-3);
    if (name == "cosine_dip") {
      sc.lattice = cosine_dip_scenario(n, xc, pc, width,
                                       j.value("amplitude", 0.5), ds,
                                       j.value("steps", 48000L),
                                       j.value("record_stride", 100));
    } else {
      if (!j.contains("rho"))
        throw std::invalid_argument("exponential scenario needs 'rho'");
      sc.lattice = exponential_scenario(n, j.at("rho").get<double>(), xc, pc,
                                        width, j.value("amplitude", 0.05), ds,
                                        j.value("steps", 2500L),
                                        j.value("record_stride", 25));
    }
    if (j.contains("mode"))
      sc.lattice.mode = lattice_mode_from_string(j.at("mode").get<std::string>());
    sc.lattice.blowup_cap = j.value("blowup_cap", 1e6);
    return sc;
  }

  if (name == "graph") {
    ScenarioConfig sc;
    sc.kind = ScenarioConfig::Kind::graph;
    sc.name = "graph";
    sc.connection = connection_from_json(j.at("connection"));
    const DirectedGraph& g = sc.connection->graph;
    std::vector<double> mu =
        j.value("mu", std::vector<double>(g.n_vertices(), 1.0));
    sc.mu = make_measure(g, std::move(mu));
    sc.x0.coef = cplx_vector_from_json(j.at("X0"));
    if (static_cast<int>(sc.x0.coef.size()) != g.n_arrows())
      throw std::invalid_argument("X0 needs one component per arrow");
    if (j.contains("psi0")) {
      sc.psi0 = cplx_vector_from_json(j.at("psi0"));
      if (static_cast<int>(sc.psi0.size()) != g.n_vertices())
        throw std::invalid_argument("psi0 needs one component per vertex");
    } else {
      double total = 0.0;
      for (double m : sc.mu.mu) total += m;
      sc.psi0.assign(g.n_vertices(), 1.0 / std::sqrt(std::abs(total)));
    }
    sc.opts = opts_from_json(j);
    return sc;
  }

  throw std::invalid_argument(
      "scenario must be one of cosine_dip, exponential, star4, graph");
}

}  // namespace qgeo
