#pragma once

// Shared test helpers: fixed-seed randomness and dense matrix realizations
// of the structure maps, built independently from the basis action so the
// library's sparse loops can be checked against plain linear algebra.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qgeo/geodesic.hpp"
#include "qgeo/graph.hpp"
#include "qgeo/metric.hpp"

namespace oracle {

using qgeo::cplx;

inline std::mt19937_64 rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

inline cplx random_unit(std::mt19937_64& r) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  double t = u(r);
  return {std::cos(t), std::sin(t)};
}

inline cplx random_cplx(std::mt19937_64& r, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return scale * cplx(u(r), u(r));
}

inline std::vector<cplx> random_cplx_vector(std::mt19937_64& r, int n,
                                            double scale = 1.0) {
  std::vector<cplx> v(n);
  for (cplx& z : v) z = random_cplx(r, scale);
  return v;
}

inline std::vector<double> random_weights(std::mt19937_64& r, int n,
                                          bool allow_negative = false) {
  std::uniform_real_distribution<double> u(0.3, 2.0);
  std::bernoulli_distribution flip(0.5);
  std::vector<double> w(n);
  for (double& v : w) {
    v = u(r);
    if (allow_negative && flip(r)) v = -v;
  }
  return w;
}

inline qgeo::VertexFunction random_function(std::mt19937_64& r, int n) {
  return random_cplx_vector(r, n);
}

inline qgeo::OneForm random_oneform(std::mt19937_64& r,
                                    const qgeo::DirectedGraph& g) {
  qgeo::OneForm w;
  w.coef = random_cplx_vector(r, g.n_arrows());
  return w;
}

inline qgeo::TwoTensor random_tensor(std::mt19937_64& r,
                                     const qgeo::DirectedGraph& g) {
  qgeo::TwoTensor t;
  t.coef = random_cplx_vector(r, g.n_paths2());
  return t;
}

inline qgeo::VectorField random_field(std::mt19937_64& r,
                                      const qgeo::DirectedGraph& g,
                                      double scale = 1.0) {
  qgeo::VectorField X;
  X.coef = random_cplx_vector(r, g.n_arrows(), scale);
  return X;
}

// Column p is the image of the basis 2-path p under the braiding.
inline Eigen::MatrixXcd sigma_matrix(const qgeo::Connection& c) {
  const int np = c.graph.n_paths2();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(np, np);
  for (int p = 0; p < np; ++p) {
    qgeo::TwoTensor basis;
    basis.coef.assign(np, 0.0);
    basis.coef[p] = 1.0;
    qgeo::TwoTensor out = qgeo::sigma_apply(c, basis);
    for (int q = 0; q < np; ++q) m(q, p) = out.coef[q];
  }
  return m;
}

// Antilinear conjugation as a matrix: dagger(t) = D * conj(t) entrywise.
inline Eigen::MatrixXcd dagger_matrix(const qgeo::DirectedGraph& g) {
  const int np = g.n_paths2();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(np, np);
  for (int p = 0; p < np; ++p) {
    qgeo::TwoTensor basis;
    basis.coef.assign(np, 0.0);
    basis.coef[p] = 1.0;
    qgeo::TwoTensor out = qgeo::dagger(g, basis);
    for (int q = 0; q < np; ++q) m(q, p) = out.coef[q];
  }
  return m;
}

}  // namespace oracle
