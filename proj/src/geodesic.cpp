#include "qgeo/geodesic.hpp"

#include <cmath>
#include <stdexcept>

namespace qgeo {

Measure make_measure(const DirectedGraph& g, std::vector<double> mu) {
  if (static_cast<int>(mu.size()) != g.n_vertices())
    throw std::invalid_argument("measure needs one value per vertex");
  Measure m;
  m.positive = true;
  for (double v : mu) {
    if (v == 0.0 || !std::isfinite(v))
      throw std::invalid_argument("measure values must be finite and nonzero");
    if (v < 0.0) m.positive = false;
  }
  m.mu = std::move(mu);
  return m;
}

static void check_field(const DirectedGraph& g, const VectorField& X) {
  if (static_cast<int>(X.coef.size()) != g.n_arrows())
    throw std::invalid_argument("vector field does not match graph");
}

VectorFieldGradient nabla_X_vf(const Connection& c, const VectorField& X) {
  const DirectedGraph& g = c.graph;
  check_field(g, X);
  const int na = g.n_arrows();
  VectorFieldGradient out;
  out.coef.assign(static_cast<size_t>(na) * na, 0.0);
  for (int b = 0; b < na; ++b) {
    if (X.coef[b] == cplx(0.0)) continue;
    for (int s : g.out_arrows(g.arrow(b).src))
      out.coef[static_cast<size_t>(b) * na + s] -= X.coef[b];
    for (int sid : c.configs.squares_by_col[b]) {
      const SquareConfig& sq = c.configs.squares[sid];
      out.coef[static_cast<size_t>(sq.row) * na + sq.side_src] +=
          c.metric.lambda[sq.row] * c.L[sid] * X.coef[b];
    }
    for (int tid : c.configs.triangles_by_col[b]) {
      const TriangleConfig& tr = c.configs.triangles[tid];
      out.coef[static_cast<size_t>(tr.row) * na + tr.side] -=
          c.metric.lambda[tr.row] * c.N[tid] * X.coef[b];
    }
  }
  return out;
}

VectorField convective(const Connection& c, const VectorField& X) {
  const DirectedGraph& g = c.graph;
  check_field(g, X);
  VectorField out;
  out.coef.assign(g.n_arrows(), 0.0);
  for (int b = 0; b < g.n_arrows(); ++b) {
    cplx flow = 0.0;
    for (int s : g.out_arrows(g.arrow(b).src)) flow += X.coef[s];
    out.coef[b] -= X.coef[b] * flow;
  }
  for (size_t sid = 0; sid < c.configs.squares.size(); ++sid) {
    const SquareConfig& sq = c.configs.squares[sid];
    out.coef[sq.row] += c.metric.lambda[sq.row] * c.L[sid] *
                        X.coef[sq.col] * X.coef[sq.side_src];
  }
  for (size_t tid = 0; tid < c.configs.triangles.size(); ++tid) {
    const TriangleConfig& tr = c.configs.triangles[tid];
    out.coef[tr.row] -= c.metric.lambda[tr.row] * c.N[tid] *
                        X.coef[tr.col] * X.coef[tr.side];
  }
  return out;
}

VertexFunction div_int(const DirectedGraph& g, const Measure& mu,
                       const VectorField& X) {
  check_field(g, X);
  VertexFunction out(g.n_vertices(), 0.0);
  for (int x = 0; x < g.n_vertices(); ++x) {
    for (int a : g.out_arrows(x)) out[x] += X.coef[a];
    for (int a : g.in_arrows(x))
      out[x] -= (mu.mu[g.arrow(a).src] / mu.mu[x]) * X.coef[a];
  }
  return out;
}

double reality_defect(const DirectedGraph& g, const Measure& mu,
                      const VectorField& X) {
  check_field(g, X);
  double worst = 0.0;
  for (int a = 0; a < g.n_arrows(); ++a) {
    double ratio = mu.mu[g.arrow(a).dst] / mu.mu[g.arrow(a).src];
    worst = std::max(worst, std::abs(std::conj(X.coef[a]) +
                                     ratio * X.coef[g.reverse_arrow(a)]));
  }
  return worst;
}

VertexFunction div_geometric(const Connection& c, const VectorField& X) {
  const DirectedGraph& g = c.graph;
  check_field(g, X);
  OneForm w;
  w.coef.resize(g.n_arrows());
  for (int a = 0; a < g.n_arrows(); ++a)
    w.coef[a] = -c.metric.g[a] * X.coef[g.reverse_arrow(a)];
  TwoTensor t = nabla(c, w);
  VertexFunction out(g.n_vertices(), 0.0);
  for (int a = 0; a < g.n_arrows(); ++a) {
    int p = g.path2_index(a, g.reverse_arrow(a));
    out[g.arrow(a).src] -= c.metric.lambda[a] * t.coef[p];
  }
  return out;
}

double div_compat_residual(const Connection& c, const Measure& mu) {
  const DirectedGraph& g = c.graph;
  const int na = g.n_arrows();
  double worst = 0.0;
  for (int b = 0; b < na; ++b) {
    const int p = g.arrow(b).src, q = g.arrow(b).dst;
    cplx lhs = 0.0;
    for (int out : g.out_arrows(p)) {
      int col = g.reverse_arrow(out);
      lhs += c.L[c.configs.square_index(b, col, na)] * c.metric.lambda[out];
    }
    double rhs = (mu.mu[q] / mu.mu[p]) *
                 (c.metric.lambda[g.reverse_arrow(b)] / c.metric.lambda[b]);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

VectorField star_vf(const Connection& c, const Measure& mu,
                    const VectorField& X, double tol) {
  const DirectedGraph& g = c.graph;
  check_field(g, X);
  double compat = div_compat_residual(c, mu);
  if (compat > tol)
    throw std::domain_error(
        "star on vector fields needs divergence compatibility (residual " +
        std::to_string(compat) + ")");
  const int na = g.n_arrows();
  VectorField out;
  out.coef.assign(na, 0.0);
  for (int b = 0; b < na; ++b) {
    const int p = g.arrow(b).dst;
    const int rev = g.reverse_arrow(b);
    cplx sum = 0.0;
    for (int pz : g.out_arrows(p)) {
      int row = g.reverse_arrow(pz);
      sum += c.metric.lambda[pz] * c.L[c.configs.square_index(row, rev, na)];
    }
    cplx factor = -(c.metric.lambda[rev] / c.metric.lambda[b]) * sum;
    out.coef[rev] = std::conj(X.coef[b]) * factor;
  }
  return out;
}

VectorField velocity_rhs(const Connection& c, const Measure& mu,
                         const VectorField& X, const VectorField& F) {
  const DirectedGraph& g = c.graph;
  check_field(g, X);
  check_field(g, F);
  VectorField out;
  out.coef.assign(g.n_arrows(), 0.0);
  for (int b = 0; b < g.n_arrows(); ++b) {
    const int y = g.arrow(b).src, x = g.arrow(b).dst;
    cplx bracket = 0.0;
    for (int a : g.out_arrows(y)) bracket -= X.coef[a];
    for (int a : g.in_arrows(y))
      bracket -= (mu.mu[g.arrow(a).src] / mu.mu[y]) * X.coef[a];
    for (int a : g.out_arrows(x)) bracket -= X.coef[a];
    for (int a : g.in_arrows(x))
      bracket += (mu.mu[g.arrow(a).src] / mu.mu[x]) * X.coef[a];
    out.coef[b] = 0.5 * X.coef[b] * bracket + F.coef[b];
  }
  for (size_t sid = 0; sid < c.configs.squares.size(); ++sid) {
    const SquareConfig& sq = c.configs.squares[sid];
    out.coef[sq.row] += c.metric.lambda[sq.row] * c.L[sid] *
                        X.coef[sq.col] * X.coef[sq.side_src];
  }
  for (size_t tid = 0; tid < c.configs.triangles.size(); ++tid) {
    const TriangleConfig& tr = c.configs.triangles[tid];
    out.coef[tr.row] -= c.metric.lambda[tr.row] * c.N[tid] *
                        X.coef[tr.col] * X.coef[tr.side];
  }
  return out;
}

static VectorField transport_conj(const DirectedGraph& g, const Measure& mu,
                                  const VectorField& B) {
  VectorField out;
  out.coef.resize(g.n_arrows());
  for (int b = 0; b < g.n_arrows(); ++b) {
    double ratio = mu.mu[g.arrow(b).dst] / mu.mu[g.arrow(b).src];
    out.coef[b] = ratio * std::conj(B.coef[g.reverse_arrow(b)]);
  }
  return out;
}

VectorField driving_force(const Connection& c, const Measure& mu,
                          const VectorField& X, double tol) {
  const DirectedGraph& g = c.graph;
  check_field(g, X);
  double defect = reality_defect(g, mu, X);
  if (defect > tol)
    throw std::domain_error("driving force needs a real field (defect " +
                            std::to_string(defect) + ")");
  VectorField zero;
  zero.coef.assign(g.n_arrows(), 0.0);
  VectorField B = velocity_rhs(c, mu, X, zero);
  VectorField moved = transport_conj(g, mu, B);
  VectorField F;
  F.coef.resize(g.n_arrows());
  for (int b = 0; b < g.n_arrows(); ++b)
    F.coef[b] = -0.5 * (B.coef[b] + moved.coef[b]);
  return F;
}

VertexFunction amplitude_rhs(const DirectedGraph& g, const Measure& mu,
                             const VectorField& X, const VertexFunction& psi) {
  check_field(g, X);
  if (static_cast<int>(psi.size()) != g.n_vertices())
    throw std::invalid_argument("amplitude does not match graph");
  VertexFunction div = div_int(g, mu, X);
  VertexFunction out(g.n_vertices(), 0.0);
  for (int x = 0; x < g.n_vertices(); ++x) {
    out[x] = -0.5 * psi[x] * div[x];
    for (int a : g.out_arrows(x))
      out[x] -= (psi[g.arrow(a).dst] - psi[x]) * X.coef[a];
  }
  return out;
}

double prob_mass(const Measure& mu, const VertexFunction& psi) {
  double total = 0.0;
  for (size_t x = 0; x < psi.size(); ++x) total += mu.mu[x] * std::norm(psi[x]);
  return total;
}

namespace {

struct FlowState {
  std::vector<cplx> x;
  std::vector<cplx> psi;
};

FlowState axpy(const FlowState& u, double h, const FlowState& k) {
  FlowState out = u;
  for (size_t i = 0; i < out.x.size(); ++i) out.x[i] += h * k.x[i];
  for (size_t i = 0; i < out.psi.size(); ++i) out.psi[i] += h * k.psi[i];
  return out;
}

bool finite(const FlowState& u) {
  for (const cplx& v : u.x)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  for (const cplx& v : u.psi)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace

EvolveResult evolve(const Connection& c, const Measure& mu,
                    const VectorField& X0, const VertexFunction& psi0,
                    const EvolveOptions& opts) {
  const DirectedGraph& g = c.graph;
  check_field(g, X0);
  if (static_cast<int>(psi0.size()) != g.n_vertices())
    throw std::invalid_argument("amplitude does not match graph");
  if (opts.steps <= 0) throw std::invalid_argument("steps must be positive");
  if (!(opts.ds > 0.0)) throw std::invalid_argument("ds must be positive");
  if (opts.record_stride <= 0)
    throw std::invalid_argument("record stride must be positive");

  auto derivative = [&](const FlowState& u) {
    VectorField X{u.x};
    VectorField F;
    if (opts.force_mode == ForceMode::generated)
      F = driving_force(c, mu, X, 1e308);
    else
      F.coef.assign(g.n_arrows(), 0.0);
    VectorField neg_xdot = velocity_rhs(c, mu, X, F);
    FlowState k;
    k.x.resize(neg_xdot.coef.size());
    for (size_t i = 0; i < k.x.size(); ++i) k.x[i] = -neg_xdot.coef[i];
    k.psi = amplitude_rhs(g, mu, X, u.psi);
    return k;
  };

  EvolveResult result;
  FlowState u{X0.coef, psi0};
  auto record = [&](double s, const FlowState& state) {
    TrajectoryRow row;
    row.s = s;
    row.X.coef = state.x;
    row.psi = state.psi;
    row.prob_mass = prob_mass(mu, state.psi);
    row.reality_defect = reality_defect(g, mu, VectorField{state.x});
    result.rows.push_back(std::move(row));
  };
  record(0.0, u);

  bool reality_reported = false;
  for (long step = 0; step < opts.steps; ++step) {
    FlowState k1 = derivative(u);
    FlowState k2 = derivative(axpy(u, 0.5 * opts.ds, k1));
    FlowState k3 = derivative(axpy(u, 0.5 * opts.ds, k2));
    FlowState k4 = derivative(axpy(u, opts.ds, k3));
    FlowState next = u;
    for (size_t i = 0; i < next.x.size(); ++i)
      next.x[i] += opts.ds / 6.0 *
                   (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
    for (size_t i = 0; i < next.psi.size(); ++i)
      next.psi[i] += opts.ds / 6.0 *
                     (k1.psi[i] + 2.0 * k2.psi[i] + 2.0 * k3.psi[i] +
                      k4.psi[i]);
    double s = opts.ds * (step + 1);

    if (!finite(next) || max_abs(next.x) > opts.blowup_cap) {
      result.status = EvolveStatus::blowup;
      result.s_end = s;
      result.steps_done = step;
      result.message = "blowup detected at s = " + std::to_string(s);
      return result;
    }
    u = std::move(next);
    double defect = reality_defect(g, mu, VectorField{u.x});
    if (defect > opts.reality_tol) {
      if (!opts.allow_complex) {
        record(s, u);
        result.status = EvolveStatus::reality_loss;
        result.s_end = s;
        result.steps_done = step + 1;
        result.message = "reality defect " + std::to_string(defect) +
                         " exceeded tolerance at s = " + std::to_string(s);
        return result;
      }
      if (!reality_reported) {
        reality_reported = true;
        result.message = "reality defect " + std::to_string(defect) +
                         " first exceeded tolerance at s = " +
                         std::to_string(s) + " (continuing)";
      }
    }
    if ((step + 1) % opts.record_stride == 0 || step + 1 == opts.steps)
      record(s, u);
    result.s_end = s;
    result.steps_done = step + 1;
  }
  return result;
}

}  // namespace qgeo
