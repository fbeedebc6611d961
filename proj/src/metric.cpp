#include "qgeo/metric.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace qgeo {

GraphMetric make_metric(const DirectedGraph& g, std::vector<double> weights) {
  if (!g.bidirected())
    throw std::invalid_argument("metric needs a bidirected graph");
  if (static_cast<int>(weights.size()) != g.n_arrows())
    throw std::invalid_argument("metric needs one weight per arrow");
  for (double w : weights)
    if (w == 0.0 || !std::isfinite(w))
      throw std::invalid_argument("metric weights must be finite and nonzero");
  GraphMetric m;
  m.g = std::move(weights);
  m.lambda.resize(g.n_arrows());
  m.edge_symmetric = true;
  for (int a = 0; a < g.n_arrows(); ++a) {
    m.lambda[a] = 1.0 / m.g[g.reverse_arrow(a)];
    if (m.g[a] != m.g[g.reverse_arrow(a)]) m.edge_symmetric = false;
  }
  return m;
}

ConfigTable enumerate_configs(const DirectedGraph& g) {
  const int na = g.n_arrows();
  ConfigTable t;
  t.square_id.assign(static_cast<size_t>(na) * na, -1);
  t.triangle_id.assign(static_cast<size_t>(na) * na, -1);
  t.squares_by_row.resize(na);
  t.squares_by_col.resize(na);
  t.triangles_by_row.resize(na);
  t.triangles_by_col.resize(na);
  for (int r = 0; r < na; ++r) {
    const Arrow& ar = g.arrow(r);
    for (int c = 0; c < na; ++c) {
      const Arrow& ac = g.arrow(c);
      int side_src = g.arrow_index(ar.src, ac.src);
      if (side_src < 0) continue;
      if (ar.dst == ac.dst) {
        int id = static_cast<int>(t.triangles.size());
        t.triangles.push_back({r, c, side_src});
        t.triangle_id[r * na + c] = id;
        t.triangles_by_row[r].push_back(id);
        t.triangles_by_col[c].push_back(id);
      } else if (int side_dst = g.arrow_index(ar.dst, ac.dst); side_dst >= 0) {
        int id = static_cast<int>(t.squares.size());
        t.squares.push_back({r, c, side_src, side_dst});
        t.square_id[r * na + c] = id;
        t.squares_by_row[r].push_back(id);
        t.squares_by_col[c].push_back(id);
      }
    }
  }
  return t;
}

Connection build_connection(const DirectedGraph& g, const GraphMetric& metric,
                            std::vector<cplx> L, std::vector<cplx> N) {
  if (static_cast<int>(metric.g.size()) != g.n_arrows())
    throw std::invalid_argument("metric does not match graph");
  Connection c{g, metric, enumerate_configs(g), std::move(L), std::move(N)};
  if (c.L.size() != c.configs.squares.size())
    throw std::invalid_argument("need one L per square configuration");
  if (c.N.size() != c.configs.triangles.size())
    throw std::invalid_argument("need one N per triangle configuration");
  return c;
}

TwoTensor sigma_apply(const Connection& c, const TwoTensor& t) {
  const DirectedGraph& g = c.graph;
  if (static_cast<int>(t.coef.size()) != g.n_paths2())
    throw std::invalid_argument("two-tensor does not match graph");
  TwoTensor out;
  out.coef.assign(g.n_paths2(), 0.0);
  for (size_t s = 0; s < c.configs.squares.size(); ++s) {
    const SquareConfig& sq = c.configs.squares[s];
    int in = g.path2_index(sq.row, sq.side_dst);
    int to = g.path2_index(sq.side_src, sq.col);
    out.coef[to] += c.metric.lambda[sq.row] * c.L[s] * t.coef[in];
  }
  return out;
}

TwoTensor alpha_apply(const Connection& c, const OneForm& w) {
  const DirectedGraph& g = c.graph;
  if (static_cast<int>(w.coef.size()) != g.n_arrows())
    throw std::invalid_argument("one-form does not match graph");
  TwoTensor out;
  out.coef.assign(g.n_paths2(), 0.0);
  for (size_t i = 0; i < c.configs.triangles.size(); ++i) {
    const TriangleConfig& tr = c.configs.triangles[i];
    int to = g.path2_index(tr.side, tr.col);
    out.coef[to] += c.metric.lambda[tr.row] * c.N[i] * w.coef[tr.row];
  }
  return out;
}

TwoTensor nabla(const Connection& c, const OneForm& w) {
  const DirectedGraph& g = c.graph;
  TwoTensor out = tensor_product(g, theta(g), w);
  TwoTensor swapped = sigma_apply(c, tensor_product(g, w, theta(g)));
  TwoTensor al = alpha_apply(c, w);
  for (int p = 0; p < g.n_paths2(); ++p)
    out.coef[p] += al.coef[p] - swapped.coef[p];
  return out;
}

WorstConfig hermitian_worst(const Connection& c) {
  const DirectedGraph& g = c.graph;
  const int na = g.n_arrows();
  WorstConfig out;
  for (size_t s = 0; s < c.configs.squares.size(); ++s) {
    const SquareConfig& sq = c.configs.squares[s];
    double w = std::abs(c.metric.lambda[sq.row] * c.metric.lambda[sq.col]);
    int partner = c.configs.square_index(sq.col, sq.row, na);
    cplx other = partner >= 0 ? c.L[partner] : cplx(0.0);
    double r = w * std::abs(c.L[s] - std::conj(other));
    if (r > out.residual) {
      out.residual = r;
      out.square = static_cast<int>(s);
      out.triangle = -1;
    }
  }
  for (size_t i = 0; i < c.configs.triangles.size(); ++i) {
    const TriangleConfig& tr = c.configs.triangles[i];
    double w = std::abs(c.metric.lambda[tr.row] * c.metric.lambda[tr.col]);
    int partner = c.configs.triangle_index(tr.col, tr.row, na);
    cplx other = partner >= 0 ? c.N[partner] : cplx(0.0);
    double r = w * std::abs(c.N[i] - std::conj(other));
    if (r > out.residual) {
      out.residual = r;
      out.square = -1;
      out.triangle = static_cast<int>(i);
    }
  }
  return out;
}

double hermitian_residual(const Connection& c) {
  return hermitian_worst(c).residual;
}

double square_metric_condition(const DirectedGraph& g,
                               const GraphMetric& metric) {
  ConfigTable t = enumerate_configs(g);
  double worst = 0.0;
  for (const SquareConfig& sq : t.squares) {
    const Arrow& row = g.arrow(sq.row);
    const Arrow& col = g.arrow(sq.col);
    bool degenerate = col.src == row.dst || col.dst == row.src;
    if (degenerate) continue;
    double lhs =
        metric.g[g.reverse_arrow(sq.side_dst)] + metric.g[g.reverse_arrow(sq.row)];
    double rhs = metric.g[sq.side_dst] + metric.g[g.reverse_arrow(sq.col)];
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

Connection torsion_free_from_Q(const DirectedGraph& g,
                               const GraphMetric& metric,
                               const std::vector<cplx>& Q,
                               const std::vector<double>& b) {
  if (static_cast<int>(Q.size()) != g.n_arrows())
    throw std::invalid_argument("need one Q per arrow");
  if (static_cast<int>(b.size()) != g.n_vertices())
    throw std::invalid_argument("need one b per vertex");
  ConfigTable t = enumerate_configs(g);
  std::vector<cplx> L(t.squares.size());
  std::vector<cplx> N(t.triangles.size());
  for (size_t s = 0; s < t.squares.size(); ++s) {
    const SquareConfig& sq = t.squares[s];
    const Arrow& row = g.arrow(sq.row);
    const Arrow& col = g.arrow(sq.col);
    cplx val = Q[g.reverse_arrow(sq.side_dst)];
    if (col.dst != row.src) val += metric.g[g.reverse_arrow(sq.side_dst)];
    if (col.src != row.dst) val += metric.g[g.reverse_arrow(sq.row)];
    L[s] = val;
  }
  for (size_t i = 0; i < t.triangles.size(); ++i)
    N[i] = b[g.arrow(t.triangles[i].row).dst];
  return build_connection(g, metric, std::move(L), std::move(N));
}

double star_compat_residual(const Connection& c) {
  const DirectedGraph& g = c.graph;
  const int na = g.n_arrows();
  double worst = 0.0;
  for (int p = 0; p < g.n_paths2(); ++p) {
    const Path2& path = g.path2(p);
    const int x = path.x, y = path.y, u = path.z;
    int uy = g.arrow_index(u, y);
    for (int vp : g.block(x, u)) {
      const int v = g.path2(vp).y;
      cplx acc = v == y ? cplx(-1.0) : cplx(0.0);
      for (int zp : g.block(x, u)) {
        const int z = g.path2(zp).y;
        int xz = g.arrow_index(x, z);
        int s1 = c.configs.square_index(uy, g.arrow_index(z, x), na);
        int s2 = c.configs.square_index(xz, g.arrow_index(v, u), na);
        acc += c.metric.lambda[uy] * c.metric.lambda[xz] *
               std::conj(c.L[s1]) * c.L[s2];
      }
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

double star_preserving_residual(const Connection& c) {
  const DirectedGraph& g = c.graph;
  const int na = g.n_arrows();
  double worst = 0.0;
  for (int a = 0; a < na; ++a) {
    int rev = g.reverse_arrow(a);
    const int x = g.arrow(a).src, y = g.arrow(a).dst;
    for (int tid : c.configs.triangles_by_row[rev]) {
      const TriangleConfig& out = c.configs.triangles[tid];
      const int v = g.arrow(out.col).src;
      cplx acc = c.N[tid];
      for (int tin : c.configs.triangles_by_row[a]) {
        const int z = g.arrow(c.configs.triangles[tin].col).src;
        int yz = g.arrow_index(y, z);
        int s = c.configs.square_index(yz, g.arrow_index(v, x), na);
        acc += c.metric.lambda[a] * std::conj(c.N[tin]) *
               c.metric.lambda[yz] * c.L[s];
      }
      worst = std::max(worst, std::abs(acc));
    }
  }
  return worst;
}

double star_preserving_direct(const Connection& c) {
  const DirectedGraph& g = c.graph;
  double worst = 0.0;
  for (int a = 0; a < g.n_arrows(); ++a) {
    OneForm w;
    w.coef.assign(g.n_arrows(), 0.0);
    w.coef[a] = 1.0;
    OneForm ws = star_oneform(g, w);
    TwoTensor lhs = sigma_apply(c, dagger(g, nabla(c, ws)));
    TwoTensor rhs = nabla(c, w);
    worst = std::max(worst, max_abs(sub(lhs.coef, rhs.coef)));
  }
  return worst;
}

QlcResidual qlc_residual(const Connection& c) {
  const DirectedGraph& g = c.graph;
  const int na = g.n_arrows();
  QlcResidual out;

  std::vector<TwoTensor> grad(na);
  for (int a = 0; a < na; ++a) {
    OneForm w;
    w.coef.assign(na, 0.0);
    w.coef[a] = 1.0;
    grad[a] = nabla(c, w);
  }

  // Coefficients of nabla(g2) on length-3 paths, keyed by the arrow triple.
  std::unordered_map<int64_t, cplx> triple;
  auto key = [na](int a1, int a2, int a3) {
    return (static_cast<int64_t>(a1) * na + a2) * na + a3;
  };
  for (int a = 0; a < na; ++a) {
    const double ga = c.metric.g[a];
    const int rev = g.reverse_arrow(a);
    for (int p = 0; p < g.n_paths2(); ++p) {
      if (grad[a].coef[p] == cplx(0.0)) continue;
      const Path2& path = g.path2(p);
      if (path.z != g.arrow(a).dst) continue;
      triple[key(path.first, path.second, rev)] += ga * grad[a].coef[p];
    }
    for (int p = 0; p < g.n_paths2(); ++p) {
      if (grad[rev].coef[p] == cplx(0.0)) continue;
      const Path2& path = g.path2(p);
      if (path.x != g.arrow(a).dst) continue;
      for (int s : c.configs.squares_by_row[a]) {
        const SquareConfig& sq = c.configs.squares[s];
        if (sq.side_dst != path.first) continue;
        triple[key(sq.side_src, sq.col, path.second)] +=
            ga * grad[rev].coef[p] * c.metric.lambda[a] * c.L[s];
      }
    }
  }
  for (const auto& [k, v] : triple) out.metric = std::max(out.metric, std::abs(v));

  const OneForm th = theta(g);
  for (int a = 0; a < na; ++a) {
    OneForm w;
    w.coef.assign(na, 0.0);
    w.coef[a] = 1.0;
    TwoTensor d = tensor_product(g, th, w);
    TwoTensor wt = tensor_product(g, w, th);
    for (int p = 0; p < g.n_paths2(); ++p) d.coef[p] += wt.coef[p];
    TwoFormMin lhs = wedge_project(g, grad[a]);
    TwoFormMin rhs = wedge_project(g, d);
    out.torsion = std::max(out.torsion, max_abs(sub(lhs.coef, rhs.coef)));
  }

  out.star = star_preserving_residual(c);
  return out;
}

}  // namespace qgeo
