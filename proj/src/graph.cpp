#include "qgeo/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qgeo {

DirectedGraph::DirectedGraph(int n_vertices,
                             std::vector<std::pair<int, int>> arrow_list)
    : n_(n_vertices) {
  if (n_ <= 0) throw std::invalid_argument("graph needs at least one vertex");
  for (auto [x, y] : arrow_list) {
    if (x < 0 || x >= n_ || y < 0 || y >= n_)
      throw std::invalid_argument("arrow endpoint out of range: " +
                                  std::to_string(x) + "->" +
                                  std::to_string(y));
    if (x == y)
      throw std::invalid_argument("self-arrow not allowed at vertex " +
                                  std::to_string(x));
  }
  std::sort(arrow_list.begin(), arrow_list.end());
  if (std::adjacent_find(arrow_list.begin(), arrow_list.end()) !=
      arrow_list.end())
    throw std::invalid_argument("duplicate arrow in arrow list");

  arrows_.reserve(arrow_list.size());
  arrow_id_.assign(static_cast<size_t>(n_) * n_, -1);
  out_.resize(n_);
  in_.resize(n_);
  for (auto [x, y] : arrow_list) {
    int id = static_cast<int>(arrows_.size());
    arrows_.push_back({x, y});
    arrow_id_[x * n_ + y] = id;
    out_[x].push_back(id);
    in_[y].push_back(id);
  }

  reverse_.assign(arrows_.size(), -1);
  for (int a = 0; a < n_arrows(); ++a) {
    reverse_[a] = arrow_index(arrows_[a].dst, arrows_[a].src);
    if (reverse_[a] < 0) bidirected_ = false;
  }

  path2_id_.assign(static_cast<size_t>(n_arrows()) * n_arrows(), -1);
  blocks_.resize(static_cast<size_t>(n_) * n_);
  for (int a1 = 0; a1 < n_arrows(); ++a1) {
    for (int a2 : out_[arrows_[a1].dst]) {
      int p = static_cast<int>(paths2_.size());
      paths2_.push_back(
          {a1, a2, arrows_[a1].src, arrows_[a1].dst, arrows_[a2].dst});
      path2_id_[a1 * n_arrows() + a2] = p;
      blocks_[arrows_[a1].src * n_ + arrows_[a2].dst].push_back(p);
    }
  }
}

DirectedGraph DirectedGraph::star(int legs) {
  if (legs < 1) throw std::invalid_argument("star needs at least one leg");
  std::vector<std::pair<int, int>> arrows;
  for (int i = 1; i <= legs; ++i) {
    arrows.emplace_back(0, i);
    arrows.emplace_back(i, 0);
  }
  return DirectedGraph(legs + 1, std::move(arrows));
}

DirectedGraph DirectedGraph::cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  std::vector<std::pair<int, int>> arrows;
  for (int i = 0; i < n; ++i) {
    arrows.emplace_back(i, (i + 1) % n);
    arrows.emplace_back((i + 1) % n, i);
  }
  return DirectedGraph(n, std::move(arrows));
}

DirectedGraph DirectedGraph::complete(int n) {
  if (n < 2) throw std::invalid_argument("complete graph needs >= 2 vertices");
  std::vector<std::pair<int, int>> arrows;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y) arrows.emplace_back(x, y);
  return DirectedGraph(n, std::move(arrows));
}

VertexFunction vf_constant(int n, cplx value) {
  return VertexFunction(n, value);
}

VertexFunction vf_delta(int n, int x) {
  VertexFunction f(n, 0.0);
  f.at(x) = 1.0;
  return f;
}

static void check_size(size_t got, size_t want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + " has wrong length");
}

OneForm differential(const DirectedGraph& g, const VertexFunction& f) {
  check_size(f.size(), g.n_vertices(), "vertex function");
  OneForm w;
  w.coef.resize(g.n_arrows());
  for (int a = 0; a < g.n_arrows(); ++a)
    w.coef[a] = f[g.arrow(a).dst] - f[g.arrow(a).src];
  return w;
}

OneForm bimodule_act(const DirectedGraph& g, const VertexFunction& f,
                     const OneForm& w, Side side) {
  check_size(f.size(), g.n_vertices(), "vertex function");
  check_size(w.coef.size(), g.n_arrows(), "one-form");
  OneForm out;
  out.coef.resize(g.n_arrows());
  for (int a = 0; a < g.n_arrows(); ++a) {
    int v = side == Side::left ? g.arrow(a).src : g.arrow(a).dst;
    out.coef[a] = f[v] * w.coef[a];
  }
  return out;
}

OneForm theta(const DirectedGraph& g) {
  OneForm w;
  w.coef.assign(g.n_arrows(), 1.0);
  return w;
}

OneForm star_oneform(const DirectedGraph& g, const OneForm& w) {
  check_size(w.coef.size(), g.n_arrows(), "one-form");
  if (!g.bidirected())
    throw std::invalid_argument("star needs a bidirected graph");
  OneForm out;
  out.coef.resize(g.n_arrows());
  for (int a = 0; a < g.n_arrows(); ++a)
    out.coef[g.reverse_arrow(a)] = -std::conj(w.coef[a]);
  return out;
}

TwoTensor tensor_product(const DirectedGraph& g, const OneForm& a,
                         const OneForm& b) {
  check_size(a.coef.size(), g.n_arrows(), "one-form");
  check_size(b.coef.size(), g.n_arrows(), "one-form");
  TwoTensor t;
  t.coef.resize(g.n_paths2());
  for (int p = 0; p < g.n_paths2(); ++p)
    t.coef[p] = a.coef[g.path2(p).first] * b.coef[g.path2(p).second];
  return t;
}

TwoTensor bimodule_act(const DirectedGraph& g, const VertexFunction& f,
                       const TwoTensor& t, Side side) {
  check_size(f.size(), g.n_vertices(), "vertex function");
  check_size(t.coef.size(), g.n_paths2(), "two-tensor");
  TwoTensor out;
  out.coef.resize(g.n_paths2());
  for (int p = 0; p < g.n_paths2(); ++p) {
    int v = side == Side::left ? g.path2(p).x : g.path2(p).z;
    out.coef[p] = f[v] * t.coef[p];
  }
  return out;
}

TwoTensor dagger(const DirectedGraph& g, const TwoTensor& t) {
  check_size(t.coef.size(), g.n_paths2(), "two-tensor");
  if (!g.bidirected())
    throw std::invalid_argument("dagger needs a bidirected graph");
  TwoTensor out;
  out.coef.resize(g.n_paths2());
  for (int p = 0; p < g.n_paths2(); ++p) {
    const Path2& path = g.path2(p);
    int q = g.path2_index(g.reverse_arrow(path.second),
                          g.reverse_arrow(path.first));
    out.coef[q] = std::conj(t.coef[p]);
  }
  return out;
}

TwoFormMin wedge_project(const DirectedGraph& g, const TwoTensor& t) {
  check_size(t.coef.size(), g.n_paths2(), "two-tensor");
  TwoFormMin out;
  out.coef.resize(g.n_paths2());
  for (int x = 0; x < g.n_vertices(); ++x) {
    for (int z = 0; z < g.n_vertices(); ++z) {
      const std::vector<int>& block = g.block(x, z);
      if (block.empty()) continue;
      cplx mean = 0.0;
      for (int p : block) mean += t.coef[p];
      mean /= static_cast<double>(block.size());
      for (int p : block) out.coef[p] = t.coef[p] - mean;
    }
  }
  return out;
}

TwoFormMin wedge(const DirectedGraph& g, const OneForm& a, const OneForm& b) {
  return wedge_project(g, tensor_product(g, a, b));
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const cplx& c : v) m = std::max(m, std::abs(c));
  return m;
}

std::vector<cplx> add(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  check_size(b.size(), a.size(), "operand");
  std::vector<cplx> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<cplx> sub(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  check_size(b.size(), a.size(), "operand");
  std::vector<cplx> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

std::vector<cplx> scale(cplx c, const std::vector<cplx>& a) {
  std::vector<cplx> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

}  // namespace qgeo
