#include "qgeo/star.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgeo {

Connection star_connection(const std::vector<double>& legs,
                           const std::vector<cplx>& phases) {
  const int n = static_cast<int>(legs.size());
  if (n < 1) throw std::invalid_argument("star needs at least one leg");
  if (phases.size() != legs.size())
    throw std::invalid_argument("need one phase per leg");
  for (double leg : legs)
    if (!(leg > 0.0))
      throw std::invalid_argument("star leg weights must be positive");
  const double root = std::sqrt(static_cast<double>(n));

  DirectedGraph graph = DirectedGraph::star(n);
  std::vector<double> g(graph.n_arrows());
  for (int k = 1; k <= n; ++k) {
    g[graph.arrow_index(0, k)] = legs[k - 1];
    g[graph.arrow_index(k, 0)] = root * legs[k - 1];
  }
  GraphMetric metric = make_metric(graph, g);

  std::vector<cplx> Q(graph.n_arrows());
  for (int k = 1; k <= n; ++k) {
    double out_weight = g[graph.arrow_index(k, 0)];
    Q[graph.arrow_index(0, k)] = out_weight / (phases[k - 1] * root);
    Q[graph.arrow_index(k, 0)] = out_weight * phases[k - 1] / root;
  }
  std::vector<double> b(graph.n_vertices(), 0.0);
  return torsion_free_from_Q(graph, metric, Q, b);
}

std::vector<StarSolution> solve_star(int n, const std::vector<double>& legs) {
  if (static_cast<int>(legs.size()) != n)
    throw std::invalid_argument("need one leg weight per leg");
  if (n < 1) throw std::invalid_argument("star needs at least one leg");
  for (double leg : legs)
    if (!(leg > 0.0))
      throw std::invalid_argument("star leg weights must be positive");
  std::vector<StarSolution> out;
  if (n >= 5) return out;
  const double re = -std::sqrt(static_cast<double>(n)) / 2.0;
  const double im = std::sqrt(static_cast<double>(4 - n)) / 2.0;
  std::vector<cplx> roots;
  roots.emplace_back(re, im);
  if (n != 4) roots.emplace_back(re, -im);
  for (const cplx& s : roots)
    out.push_back({star_connection(legs, std::vector<cplx>(n, s)), s});
  return out;
}

cplx mobius_partner(cplx s1) {
  const double r = std::numbers::sqrt2;
  cplx denom = r * s1 + 1.0;
  if (std::abs(denom) == 0.0)
    throw std::invalid_argument("phase at the pole of the Moebius map");
  return -(s1 + r) / denom;
}

double star_phase_defect(int n, const std::vector<double>& legs, int samples) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  double best = -1.0;
  for (int k = 0; k < samples; ++k) {
    double phi = 2.0 * std::numbers::pi * k / samples;
    cplx s(std::cos(phi), std::sin(phi));
    Connection conn = star_connection(legs, std::vector<cplx>(n, s));
    double r = star_compat_residual(conn);
    if (best < 0.0 || r < best) best = r;
  }
  return best;
}

static void check_star4_sizes(size_t nx, size_t nmu, size_t nlam) {
  if (nx != 4 || nmu != 5 || nlam != 4)
    throw std::invalid_argument(
        "reduced 4-star flow needs 4 field components, 5 measure values and "
        "4 center-out lambda weights");
}

std::vector<cplx> star4_driving_force(const std::vector<cplx>& X_in,
                                      const std::vector<double>& mu,
                                      const std::vector<double>& lambda_out) {
  check_star4_sizes(X_in.size(), mu.size(), lambda_out.size());
  std::vector<cplx> X_out(4);
  for (int i = 0; i < 4; ++i)
    X_out[i] = -(mu[i + 1] / mu[0]) * std::conj(X_in[i]);
  cplx cross = 0.0;
  for (int i = 0; i < 4; ++i) cross += X_out[i] * X_in[i];
  std::vector<cplx> F(4);
  for (int y = 0; y < 4; ++y) {
    cplx weighted = 0.0;
    for (int i = 0; i < 4; ++i)
      weighted += X_out[i] * (1.0 - lambda_out[y] / lambda_out[i]);
    double ratio = mu[0] / mu[y + 1];
    F[y] = 0.5 * X_in[y] * weighted - 0.25 * ratio * cross +
           (1.0 + ratio) * X_in[y] * X_out[y];
  }
  return F;
}

std::vector<cplx> star4_velocity_rhs(const std::vector<cplx>& X_in,
                                     const std::vector<double>& mu,
                                     const std::vector<double>& lambda_out) {
  check_star4_sizes(X_in.size(), mu.size(), lambda_out.size());
  std::vector<cplx> out(4);
  for (int y = 0; y < 4; ++y) {
    cplx bracket = -X_in[y];
    for (int i = 0; i < 4; ++i) bracket += (mu[i + 1] / mu[0]) * X_in[i];
    for (int i = 0; i < 4; ++i)
      bracket -= std::conj(X_in[i]) * (mu[i + 1] * lambda_out[y]) /
                 (mu[0] * lambda_out[i]);
    bracket += (2.0 * mu[y + 1] / mu[0] - 1.0) * std::conj(X_in[y]);
    cplx quad = 0.0;
    for (int i = 0; i < 4; ++i)
      quad += (mu[i + 1] / mu[y + 1]) * std::norm(X_in[i]);
    out[y] = 0.5 * X_in[y] * bracket + 0.25 * quad;
  }
  return out;
}

double star4_blowup_time() {
  return 8.0 * std::numbers::pi / (3.0 * std::numbers::sqrt3);
}

double star4_xi_closed_form(double s) {
  if (s >= star4_blowup_time())
    throw std::domain_error("xi blows up at s = 8 pi / (3 sqrt(3))");
  const double r3 = std::numbers::sqrt3;
  return 0.25 * (r3 * std::tan(std::numbers::pi / 6.0 - r3 * s / 4.0) + 3.0);
}

std::vector<cplx> star4_hamiltonian(double xi) {
  const cplx mi(0.0, -1.0);
  return {mi * 0.0,        mi * xi,  mi * (3.0 * (xi - 1.0)),
          mi * (-xi),      mi * 0.0, mi * 0.0,
          mi * (1.0 - xi), mi * 0.0, mi * 0.0};
}

}  // namespace qgeo
