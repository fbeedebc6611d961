#include "qgeo/cayley.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

namespace qgeo {

GroupSpec make_group(int order, std::vector<int> table,
                     std::vector<int> generators) {
  if (order <= 0) throw std::invalid_argument("group order must be positive");
  if (static_cast<int>(table.size()) != order * order)
    throw std::invalid_argument("composition table must be order x order");
  for (int v : table)
    if (v < 0 || v >= order)
      throw std::invalid_argument("composition table entry out of range");

  GroupSpec g;
  g.order = order;
  g.table = std::move(table);

  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b)
      for (int c = 0; c < order; ++c)
        if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
          throw std::invalid_argument("composition table is not associative");

  g.identity = -1;
  for (int e = 0; e < order; ++e) {
    bool ok = true;
    for (int a = 0; a < order && ok; ++a)
      ok = g.mul(e, a) == a && g.mul(a, e) == a;
    if (ok) {
      g.identity = e;
      break;
    }
  }
  if (g.identity < 0)
    throw std::invalid_argument("composition table has no identity");

  g.inverse.assign(order, -1);
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b)
      if (g.mul(a, b) == g.identity && g.mul(b, a) == g.identity) {
        g.inverse[a] = b;
        break;
      }
    if (g.inverse[a] < 0)
      throw std::invalid_argument("element " + std::to_string(a) +
                                  " has no inverse");
  }

  if (generators.empty())
    throw std::invalid_argument("generating set must be nonempty");
  std::vector<int> sorted = generators;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("duplicate generator");
  for (int a : generators) {
    if (a < 0 || a >= order)
      throw std::invalid_argument("generator out of range");
    if (a == g.identity)
      throw std::invalid_argument("identity cannot be a generator");
    if (!std::binary_search(sorted.begin(), sorted.end(), g.inverse[a]))
      throw std::invalid_argument(
          "generating set must be closed under inverses");
  }
  g.generators = std::move(generators);

  std::vector<char> seen(order, 0);
  std::queue<int> frontier;
  frontier.push(g.identity);
  seen[g.identity] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int x = frontier.front();
    frontier.pop();
    for (int a : g.generators) {
      int y = g.mul(x, a);
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        frontier.push(y);
      }
    }
  }
  if (reached != order)
    throw std::invalid_argument("generating set does not connect the group");
  return g;
}

GroupSpec cyclic_group(int n, std::vector<int> generators) {
  if (n < 3) throw std::invalid_argument("cyclic group needs order >= 3 here");
  std::vector<int> table(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a * n + b] = (a + b) % n;
  if (generators.empty()) generators = {1, n - 1};
  return make_group(n, std::move(table), std::move(generators));
}

CayleyCalculus cayley_graph(const GroupSpec& g) {
  CayleyCalculus c;
  c.group = g;
  const int ng = static_cast<int>(g.generators.size());
  std::vector<std::pair<int, int>> arrows;
  for (int x = 0; x < g.order; ++x)
    for (int a : g.generators) arrows.emplace_back(x, g.mul(x, a));
  c.graph = DirectedGraph(g.order, std::move(arrows));
  c.arrow_of.assign(static_cast<size_t>(g.order) * ng, -1);
  c.gen_of_arrow.assign(c.graph.n_arrows(), -1);
  for (int x = 0; x < g.order; ++x)
    for (int slot = 0; slot < ng; ++slot) {
      int id = c.graph.arrow_index(x, g.mul(x, g.generators[slot]));
      c.arrow_of[x * ng + slot] = id;
      c.gen_of_arrow[id] = slot;
    }
  c.inv_gen.assign(ng, -1);
  for (int slot = 0; slot < ng; ++slot) {
    int want = g.inverse[g.generators[slot]];
    for (int other = 0; other < ng; ++other)
      if (g.generators[other] == want) c.inv_gen[slot] = other;
  }
  return c;
}

CayleyMetric make_cayley_metric(const CayleyCalculus& c,
                                std::vector<double> weights) {
  if (weights.size() !=
      static_cast<size_t>(c.n_gen()) * c.group.order)
    throw std::invalid_argument(
        "metric needs one weight per generator and element");
  for (double w : weights)
    if (w == 0.0 || !std::isfinite(w))
      throw std::invalid_argument("metric weights must be finite and nonzero");
  return CayleyMetric{std::move(weights)};
}

XiCoeffs make_xi(const CayleyCalculus& c, std::vector<cplx> values) {
  const int ng = c.n_gen();
  const int n = c.group.order;
  if (values.size() != static_cast<size_t>(ng) * ng * ng * n)
    throw std::invalid_argument("connection coefficients have wrong length");
  XiCoeffs xi;
  xi.n_gen = ng;
  xi.order = n;
  xi.xi = std::move(values);
  const GroupSpec& g = c.group;
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < ng; ++b)
      for (int d = 0; d < ng; ++d) {
        int elem = g.mul(g.inv(g.generators[a]),
                         g.mul(g.generators[b], g.generators[d]));
        bool allowed = elem == g.identity;
        for (int gen : g.generators) allowed = allowed || elem == gen;
        if (allowed) continue;
        for (int x = 0; x < n; ++x)
          if (xi.at(a, b, d, x) != cplx(0.0))
            throw std::invalid_argument(
                "coefficient off the bimodule support at generators (" +
                std::to_string(a) + "," + std::to_string(b) + "," +
                std::to_string(d) + ")");
      }
  return xi;
}

XiCoeffs zero_xi(const CayleyCalculus& c) {
  XiCoeffs xi;
  xi.n_gen = c.n_gen();
  xi.order = c.group.order;
  xi.xi.assign(static_cast<size_t>(xi.n_gen) * xi.n_gen * xi.n_gen * xi.order,
               0.0);
  return xi;
}

// h_a(x) = 1 / g_{a^{-1}}(x a).
static double dual_weight(const CayleyCalculus& c, const CayleyMetric& m,
                          int slot, int x) {
  int xa = c.shift(x, slot);
  return 1.0 / m.g[static_cast<size_t>(c.inv_gen[slot]) * c.group.order + xa];
}

double hermitian_check_cayley(const CayleyCalculus& c, const CayleyMetric& m,
                              const XiCoeffs& xi) {
  const int ng = c.n_gen();
  const int n = c.group.order;
  double worst = 0.0;
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < ng; ++b)
      for (int cc = 0; cc < ng; ++cc)
        for (int x = 0; x < n; ++x) {
          int xc = c.shift(x, cc);
          cplx lhs = dual_weight(c, m, b, x) *
                     std::conj(xi.at(a, c.inv_gen[cc], b, xc));
          cplx rhs = xi.at(b, cc, a, x) * dual_weight(c, m, a, xc);
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return worst;
}

std::vector<cplx> sigma_cayley(const CayleyCalculus& c, const XiCoeffs& xi,
                               const std::vector<cplx>& t) {
  const int ng = c.n_gen();
  const int n = c.group.order;
  if (t.size() != static_cast<size_t>(ng) * ng * n)
    throw std::invalid_argument("tensor has wrong length");
  std::vector<cplx> out(t.size(), 0.0);
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < ng; ++b) {
      int ab = c.group.mul(c.group.generators[a], c.group.generators[b]);
      for (int cc = 0; cc < ng; ++cc)
        for (int d = 0; d < ng; ++d) {
          if (c.group.mul(c.group.generators[cc], c.group.generators[d]) != ab)
            continue;
          for (int x = 0; x < n; ++x)
            out[(static_cast<size_t>(cc) * ng + d) * n + x] +=
                xi.at(a, cc, d, x) * t[(static_cast<size_t>(a) * ng + b) * n + x];
        }
    }
  return out;
}

double star_compat_cayley(const CayleyCalculus& c, const XiCoeffs& xi) {
  const GroupSpec& g = c.group;
  const int ng = c.n_gen();
  double worst = 0.0;
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < ng; ++b) {
      int ab = g.mul(g.generators[a], g.generators[b]);
      int abinv = g.inv(ab);
      for (int r = 0; r < ng; ++r)
        for (int s = 0; s < ng; ++s) {
          if (g.mul(g.generators[r], g.generators[s]) != abinv) continue;
          double want = (r == c.inv_gen[b] && s == c.inv_gen[a]) ? 1.0 : 0.0;
          for (int x = 0; x < g.order; ++x) {
            cplx acc = -want;
            int shifted = g.mul(x, abinv);
            for (int cc = 0; cc < ng; ++cc)
              for (int d = 0; d < ng; ++d) {
                if (g.mul(g.generators[cc], g.generators[d]) != ab) continue;
                acc += std::conj(xi.at(a, cc, d, shifted)) *
                       xi.at(c.inv_gen[d], r, s, x);
              }
            worst = std::max(worst, std::abs(acc));
          }
        }
    }
  return worst;
}

double torsion_check_cayley(const CayleyCalculus& c, const XiCoeffs& xi) {
  const GroupSpec& g = c.group;
  const int ng = c.n_gen();
  double worst = 0.0;
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < ng; ++b) {
      int ab = g.mul(g.generators[a], g.generators[b]);
      TwoTensor t;
      t.coef.assign(c.graph.n_paths2(), 0.0);
      for (int x = 0; x < g.order; ++x) {
        int first = c.arrow_of[x * ng + a];
        int second = c.arrow_of[c.shift(x, a) * ng + b];
        t.coef[c.graph.path2_index(first, second)] += 1.0;
      }
      for (int cc = 0; cc < ng; ++cc)
        for (int d = 0; d < ng; ++d) {
          if (g.mul(g.generators[cc], g.generators[d]) != ab) continue;
          for (int x = 0; x < g.order; ++x) {
            int first = c.arrow_of[x * ng + cc];
            int second = c.arrow_of[c.shift(x, cc) * ng + d];
            t.coef[c.graph.path2_index(first, second)] += xi.at(a, cc, d, x);
          }
        }
      worst = std::max(worst, max_abs(wedge_project(c.graph, t)));
    }
  return worst;
}

static void check_cayley_field(const CayleyCalculus& c,
                               const std::vector<cplx>& X) {
  if (X.size() != static_cast<size_t>(c.n_gen()) * c.group.order)
    throw std::invalid_argument(
        "field needs one component per generator and element");
}

VertexFunction div_int_cayley(const CayleyCalculus& c,
                              const std::vector<double>& mu,
                              const std::vector<cplx>& X) {
  check_cayley_field(c, X);
  const int n = c.group.order;
  VertexFunction out(n, 0.0);
  for (int a = 0; a < c.n_gen(); ++a)
    for (int x = 0; x < n; ++x) {
      int back = c.group.mul(x, c.group.inv(c.group.generators[a]));
      out[x] += X[static_cast<size_t>(a) * n + x] -
                X[static_cast<size_t>(a) * n + back] * mu[back] / mu[x];
    }
  return out;
}

// g_a(x) sum_b Xi^a_{b,b^{-1}}(x) / g_{b^{-1}}(x b), the factor comparing
// the geometric divergence with the measure transport.
static cplx div_factor(const CayleyCalculus& c, const CayleyMetric& m,
                       const XiCoeffs& xi, int a, int x) {
  const int n = c.group.order;
  cplx sum = 0.0;
  for (int b = 0; b < c.n_gen(); ++b)
    sum += xi.at(a, b, c.inv_gen[b], x) /
           m.g[static_cast<size_t>(c.inv_gen[b]) * n + c.shift(x, b)];
  return m.g[static_cast<size_t>(a) * n + x] * sum;
}

VertexFunction div_cayley(const CayleyCalculus& c, const CayleyMetric& m,
                          const XiCoeffs& xi, const std::vector<cplx>& X) {
  check_cayley_field(c, X);
  const int n = c.group.order;
  VertexFunction out(n, 0.0);
  for (int a = 0; a < c.n_gen(); ++a)
    for (int x = 0; x < n; ++x)
      out[x] += X[static_cast<size_t>(c.inv_gen[a]) * n + x] -
                X[static_cast<size_t>(c.inv_gen[a]) * n + c.shift(x, a)] *
                    div_factor(c, m, xi, a, x);
  return out;
}

double div_compat_residual_cayley(const CayleyCalculus& c,
                                  const CayleyMetric& m, const XiCoeffs& xi,
                                  const std::vector<double>& mu) {
  double worst = 0.0;
  for (int a = 0; a < c.n_gen(); ++a)
    for (int x = 0; x < c.group.order; ++x) {
      double transport = mu[c.shift(x, a)] / mu[x];
      worst = std::max(worst,
                       std::abs(div_factor(c, m, xi, a, x) - transport));
    }
  return worst;
}

std::vector<cplx> star_vf_cayley(const CayleyCalculus& c,
                                 const CayleyMetric& m, const XiCoeffs& xi,
                                 const std::vector<cplx>& X) {
  check_cayley_field(c, X);
  const int n = c.group.order;
  std::vector<cplx> out(X.size(), 0.0);
  for (int a = 0; a < c.n_gen(); ++a)
    for (int x = 0; x < n; ++x)
      out[static_cast<size_t>(a) * n + x] =
          -std::conj(X[static_cast<size_t>(c.inv_gen[a]) * n +
                       c.shift(x, a)] ) *
          std::conj(div_factor(c, m, xi, a, x));
  return out;
}

double reality_defect_cayley(const CayleyCalculus& c,
                             const std::vector<double>& mu,
                             const std::vector<cplx>& X) {
  check_cayley_field(c, X);
  const int n = c.group.order;
  double worst = 0.0;
  for (int a = 0; a < c.n_gen(); ++a)
    for (int x = 0; x < n; ++x) {
      int xa = c.shift(x, a);
      cplx residual =
          std::conj(X[static_cast<size_t>(a) * n + x]) +
          X[static_cast<size_t>(c.inv_gen[a]) * n + xa] * mu[xa] / mu[x];
      worst = std::max(worst, std::abs(residual));
    }
  return worst;
}

std::vector<cplx> velocity_rhs_cayley(const CayleyCalculus& c,
                                      const XiCoeffs& xi,
                                      const std::vector<double>& mu,
                                      const std::vector<cplx>& X) {
  check_cayley_field(c, X);
  const GroupSpec& g = c.group;
  const int ng = c.n_gen();
  const int n = g.order;
  std::vector<cplx> out(X.size(), 0.0);
  auto comp = [&](int slot, int x) -> cplx {
    return X[static_cast<size_t>(slot) * n + x];
  };
  for (int a = 0; a < ng; ++a) {
    const int ga = g.generators[a];
    for (int x = 0; x < n; ++x) {
      const int xa = g.mul(x, ga);
      cplx term1 = 0.0;
      for (int b = 0; b < ng; ++b) {
        int y = g.mul(x, g.mul(ga, g.inv(g.generators[b])));
        term1 += -comp(b, x) + comp(b, y) * mu[y] / mu[xa];
      }
      term1 *= comp(a, x);

      cplx term2 = 0.0;
      for (int b = 0; b < ng; ++b)
        for (int d = 0; d < ng; ++d)
          term2 += xi.at(a, b, d, x) * comp(d, c.shift(x, b)) * comp(b, x);

      cplx term3 = 0.0;
      for (int b = 0; b < ng; ++b) {
        int y = g.mul(x, g.mul(ga, g.inv(g.generators[b])));
        for (int d = 0; d < ng; ++d) {
          int yd = g.mul(y, g.inv(g.generators[d]));
          term3 -= std::conj(xi.at(c.inv_gen[a], c.inv_gen[b],
                                   c.inv_gen[d], xa)) *
                   comp(d, yd) * mu[yd] * comp(b, y) / mu[x];
        }
      }
      out[static_cast<size_t>(a) * n + x] = term1 + term2 + term3;
    }
  }
  return out;
}

VertexFunction amplitude_rhs_cayley(const CayleyCalculus& c,
                                    const std::vector<double>& mu,
                                    const std::vector<cplx>& X,
                                    const VertexFunction& psi) {
  check_cayley_field(c, X);
  const int n = c.group.order;
  if (static_cast<int>(psi.size()) != n)
    throw std::invalid_argument("amplitude does not match group");
  VertexFunction div = div_int_cayley(c, mu, X);
  VertexFunction out(n, 0.0);
  for (int x = 0; x < n; ++x) {
    out[x] = -0.5 * psi[x] * div[x];
    for (int a = 0; a < c.n_gen(); ++a)
      out[x] -= (psi[c.shift(x, a)] - psi[x]) *
                X[static_cast<size_t>(a) * n + x];
  }
  return out;
}

Connection to_graph_connection(const CayleyCalculus& c, const CayleyMetric& m,
                               const XiCoeffs& xi) {
  const int n = c.group.order;
  const int ng = c.n_gen();
  std::vector<double> weights(c.graph.n_arrows());
  for (int x = 0; x < n; ++x)
    for (int slot = 0; slot < ng; ++slot)
      weights[c.arrow_of[x * ng + slot]] =
          m.g[static_cast<size_t>(slot) * n + x];
  GraphMetric metric = make_metric(c.graph, weights);

  ConfigTable configs = enumerate_configs(c.graph);
  std::vector<cplx> L(configs.squares.size());
  for (size_t s = 0; s < configs.squares.size(); ++s) {
    const SquareConfig& sq = configs.squares[s];
    int x = c.graph.arrow(sq.row).src;
    int a = c.gen_of_arrow[sq.row];
    int cc = c.gen_of_arrow[sq.side_src];
    int d = c.gen_of_arrow[sq.col];
    double scale =
        m.g[static_cast<size_t>(c.inv_gen[a]) * n + c.shift(x, a)];
    L[s] = xi.at(a, cc, d, x) * scale;
  }
  std::vector<cplx> N(configs.triangles.size());
  for (size_t t = 0; t < configs.triangles.size(); ++t) {
    const TriangleConfig& tr = configs.triangles[t];
    int x = c.graph.arrow(tr.row).src;
    int a = c.gen_of_arrow[tr.row];
    int b = c.gen_of_arrow[tr.side];
    int d = c.gen_of_arrow[tr.col];
    double scale =
        m.g[static_cast<size_t>(c.inv_gen[a]) * n + c.shift(x, a)];
    N[t] = -xi.at(a, b, d, x) * scale;
  }
  return build_connection(c.graph, metric, std::move(L), std::move(N));
}

VectorField field_to_graph(const CayleyCalculus& c,
                           const std::vector<cplx>& X) {
  check_cayley_field(c, X);
  const int n = c.group.order;
  VectorField out;
  out.coef.resize(c.graph.n_arrows());
  for (int x = 0; x < n; ++x)
    for (int slot = 0; slot < c.n_gen(); ++slot)
      out.coef[c.arrow_of[x * c.n_gen() + slot]] =
          X[static_cast<size_t>(slot) * n + x];
  return out;
}

}  // namespace qgeo
