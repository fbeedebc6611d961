#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace qgeo {

using cplx = std::complex<double>;

// Functions on vertices, one complex value per vertex.
using VertexFunction = std::vector<cplx>;

struct Arrow {
  int src = -1;
  int dst = -1;
};

// Length-2 directed path x -> y -> z, stored as the two arrow ids.
struct Path2 {
  int first = -1;
  int second = -1;
  int x = -1;
  int y = -1;
  int z = -1;
};

// Finite directed graph with no self-arrows and duplicate-free arrows.
// Arrows are kept in canonical source-major then target order so all
// coefficient arrays are reproducible across runs.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  DirectedGraph(int n_vertices, std::vector<std::pair<int, int>> arrow_list);

  // Center 0, leaves 1..legs, both arrow directions on every leg.
  static DirectedGraph star(int legs);
  // Bidirected cycle on n >= 3 vertices, i <-> i+1 mod n.
  static DirectedGraph cycle(int n);
  // All ordered pairs x != y.
  static DirectedGraph complete(int n);

  int n_vertices() const { return n_; }
  int n_arrows() const { return static_cast<int>(arrows_.size()); }
  const Arrow& arrow(int a) const { return arrows_[a]; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  int arrow_index(int x, int y) const { return arrow_id_[x * n_ + y]; }
  bool has_arrow(int x, int y) const { return arrow_index(x, y) >= 0; }
  int reverse_arrow(int a) const { return reverse_[a]; }
  bool bidirected() const { return bidirected_; }
  const std::vector<int>& out_arrows(int x) const { return out_[x]; }
  const std::vector<int>& in_arrows(int y) const { return in_[y]; }

  int n_paths2() const { return static_cast<int>(paths2_.size()); }
  const Path2& path2(int p) const { return paths2_[p]; }
  const std::vector<Path2>& paths2() const { return paths2_; }
  // -1 when the two arrows do not compose.
  int path2_index(int first_arrow, int second_arrow) const {
    return path2_id_[first_arrow * n_arrows() + second_arrow];
  }
  // Ids of paths x -> y -> z for fixed endpoints, ascending in y.
  const std::vector<int>& block(int x, int z) const {
    return blocks_[x * n_ + z];
  }

 private:
  int n_ = 0;
  std::vector<Arrow> arrows_;
  std::vector<int> arrow_id_;
  std::vector<int> reverse_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  bool bidirected_ = true;
  std::vector<Path2> paths2_;
  std::vector<int> path2_id_;
  std::vector<std::vector<int>> blocks_;
};

// Element of Omega^1: one complex coefficient per arrow.
struct OneForm {
  std::vector<cplx> coef;
};

// Element of Omega^1 (x)_A Omega^1: one coefficient per length-2 path.
struct TwoTensor {
  std::vector<cplx> coef;
};

// Representative of the degree-2 quotient: per-(x,z) block the coefficient
// vector over intermediate vertices, reduced modulo the all-ones vector
// (stored mean-free on the same path indexing as TwoTensor).
struct TwoFormMin {
  std::vector<cplx> coef;
};

enum class Side { left, right };

VertexFunction vf_constant(int n, cplx value);
VertexFunction vf_delta(int n, int x);

// df, coefficient f(y) - f(x) on the arrow x -> y.
OneForm differential(const DirectedGraph& g, const VertexFunction& f);

// Left action scales the coefficient on x -> y by f(x), right action by f(y).
OneForm bimodule_act(const DirectedGraph& g, const VertexFunction& f,
                     const OneForm& w, Side side);

// The inner element: all coefficients 1.
OneForm theta(const DirectedGraph& g);

// (sum a_{x->y} w_{x->y})^* = -sum conj(a_{x->y}) w_{y->x}; needs a reverse
// for every arrow, so the graph must be bidirected.
OneForm star_oneform(const DirectedGraph& g, const OneForm& w);

TwoTensor tensor_product(const DirectedGraph& g, const OneForm& a,
                         const OneForm& b);
TwoTensor bimodule_act(const DirectedGraph& g, const VertexFunction& f,
                       const TwoTensor& t, Side side);

// (w (x) e)^dagger = e^* (x) w^*: path (x->y, y->z) maps to (z->y, y->x)
// with conjugated coefficient (the two star minus signs cancel).
TwoTensor dagger(const DirectedGraph& g, const TwoTensor& t);

// Quotient to the minimal 2-forms: subtract the per-(x,z) block mean, so a
// tensor maps to zero exactly when its coefficients are constant in the
// intermediate vertex over every block.
TwoFormMin wedge_project(const DirectedGraph& g, const TwoTensor& t);

TwoFormMin wedge(const DirectedGraph& g, const OneForm& a, const OneForm& b);

double max_abs(const std::vector<cplx>& v);
inline double max_abs(const OneForm& w) { return max_abs(w.coef); }
inline double max_abs(const TwoTensor& t) { return max_abs(t.coef); }
inline double max_abs(const TwoFormMin& t) { return max_abs(t.coef); }

std::vector<cplx> add(const std::vector<cplx>& a, const std::vector<cplx>& b);
std::vector<cplx> sub(const std::vector<cplx>& a, const std::vector<cplx>& b);
std::vector<cplx> scale(cplx c, const std::vector<cplx>& a);

}  // namespace qgeo
