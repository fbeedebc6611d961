#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "oracles.hpp"
#include "qgeo/cayley.hpp"
#include "qgeo/lattice.hpp"

using namespace qgeo;

namespace {

// Symmetric group on three letters: permutations indexed 0..5,
// table[a*6+b] = a after b.
GroupSpec make_s3(std::vector<int> generators) {
  const std::array<std::array<int, 3>, 6> perms = {{{0, 1, 2},
                                                    {1, 0, 2},
                                                    {0, 2, 1},
                                                    {2, 1, 0},
                                                    {1, 2, 0},
                                                    {2, 0, 1}}};
  auto index_of = [&](const std::array<int, 3>& p) {
    for (int i = 0; i < 6; ++i)
      if (perms[i] == p) return i;
    return -1;
  };
  std::vector<int> table(36);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> comp;
      for (int i = 0; i < 3; ++i) comp[i] = perms[a][perms[b][i]];
      table[a * 6 + b] = index_of(comp);
    }
  return make_group(6, std::move(table), std::move(generators));
}

bool on_support(const GroupSpec& g, int ga, int gb, int gc) {
  int elem = g.mul(g.mul(g.inv(ga), gb), gc);
  if (elem == g.identity) return true;
  return std::find(g.generators.begin(), g.generators.end(), elem) !=
         g.generators.end();
}

XiCoeffs random_xi(const CayleyCalculus& c, std::mt19937_64& r) {
  const int ng = c.n_gen();
  const int n = c.group.order;
  std::vector<cplx> values(static_cast<size_t>(ng) * ng * ng * n, 0.0);
  XiCoeffs tmp;
  tmp.n_gen = ng;
  tmp.order = n;
  tmp.xi = std::move(values);
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < ng; ++b)
      for (int d = 0; d < ng; ++d) {
        if (!on_support(c.group, c.group.generators[a],
                        c.group.generators[b], c.group.generators[d]))
          continue;
        for (int x = 0; x < n; ++x) tmp.at(a, b, d, x) = oracle::random_cplx(r);
      }
  return make_xi(c, std::move(tmp.xi));
}

std::vector<double> random_mu(std::mt19937_64& r, int n) {
  return oracle::random_weights(r, n);
}

std::vector<cplx> random_cayley_field(std::mt19937_64& r,
                                      const CayleyCalculus& c) {
  return oracle::random_cplx_vector(r, c.n_gen() * c.group.order);
}

VectorField to_graph_field(const CayleyCalculus& c,
                           const std::vector<cplx>& X) {
  return field_to_graph(c, X);
}

// Slot-major field from a graph field.
std::vector<cplx> from_graph_field(const CayleyCalculus& c,
                                   const VectorField& X) {
  const int n = c.group.order;
  const int ng = c.n_gen();
  std::vector<cplx> out(static_cast<size_t>(ng) * n);
  for (int x = 0; x < n; ++x)
    for (int slot = 0; slot < ng; ++slot)
      out[static_cast<size_t>(slot) * n + x] =
          X.coef[c.arrow_of[x * ng + slot]];
  return out;
}

std::vector<cplx> random_real_cayley(std::mt19937_64& r,
                                     const CayleyCalculus& c,
                                     const std::vector<double>& mu) {
  const DirectedGraph& g = c.graph;
  VectorField X;
  X.coef.assign(g.n_arrows(), 0.0);
  for (int a = 0; a < g.n_arrows(); ++a) {
    int rev = g.reverse_arrow(a);
    if (rev < a) continue;
    const Arrow& ar = g.arrow(a);
    X.coef[a] = oracle::random_cplx(r);
    X.coef[rev] = -(mu[ar.src] / mu[ar.dst]) * std::conj(X.coef[a]);
  }
  return from_graph_field(c, X);
}

}  // namespace

TEST_CASE("group construction validates the axioms") {
  // left projection has no identity
  {
    std::vector<int> table(16);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) table[a * 4 + b] = a;
    CHECK_THROWS_AS(make_group(4, table, {1}), std::invalid_argument);
  }
  // saturating addition has an identity but no inverses
  {
    std::vector<int> table(16);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) table[a * 4 + b] = std::min(a + b, 3);
    CHECK_THROWS_AS(make_group(4, table, {1, 3}), std::invalid_argument);
  }
  // corrupting one entry of Z4 breaks the axioms
  {
    std::vector<int> table(16);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) table[a * 4 + b] = (a + b) % 4;
    table[1 * 4 + 1] = 3;
    CHECK_THROWS_AS(make_group(4, table, {1, 3}), std::invalid_argument);
  }
  // malformed table sizes and entries
  CHECK_THROWS_AS(make_group(4, std::vector<int>(15, 0), {1}),
                  std::invalid_argument);
  {
    std::vector<int> table(16);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) table[a * 4 + b] = (a + b) % 4;
    table[5] = 17;
    CHECK_THROWS_AS(make_group(4, table, {1, 3}), std::invalid_argument);
  }

  // generator validation on the cyclic family
  CHECK_THROWS_AS(cyclic_group(5, {1}), std::invalid_argument);
  CHECK_THROWS_AS(cyclic_group(5, {0, 1, 4}), std::invalid_argument);
  CHECK_THROWS_AS(cyclic_group(5, {1, 1, 4}), std::invalid_argument);
  CHECK_THROWS_AS(cyclic_group(5, {1, 9}), std::invalid_argument);
  CHECK_THROWS_AS(cyclic_group(6, {2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(cyclic_group(2), std::invalid_argument);
}

TEST_CASE("cyclic calculus matches the cycle graph") {
  CayleyCalculus c = z_calculus(5);
  CHECK(c.group.order == 5);
  REQUIRE(c.n_gen() == 2);
  CHECK(c.group.generators[0] == 1);
  CHECK(c.group.generators[1] == 4);
  CHECK(c.inv_gen[0] == 1);
  CHECK(c.inv_gen[1] == 0);

  const DirectedGraph& g = c.graph;
  CHECK(g.n_vertices() == 5);
  CHECK(g.n_arrows() == 10);
  for (int x = 0; x < 5; ++x) {
    CHECK(g.has_arrow(x, (x + 1) % 5));
    CHECK(g.has_arrow(x, (x + 4) % 5));
    int plus = c.arrow_of[x * 2 + 0];
    CHECK(g.arrow(plus).dst == (x + 1) % 5);
    CHECK(c.gen_of_arrow[plus] == 0);
    CHECK(c.shift(x, 0) == (x + 1) % 5);
    CHECK(c.shift(x, 1) == (x + 4) % 5);
  }
}

TEST_CASE("two transpositions give a six-cycle") {
  GroupSpec s3 = make_s3({1, 2});
  CHECK(s3.identity == 0);
  CHECK(s3.inv(1) == 1);
  CHECK(s3.inv(2) == 2);
  CayleyCalculus c = cayley_graph(s3);
  const DirectedGraph& g = c.graph;
  CHECK(g.n_arrows() == 12);
  CHECK(g.bidirected());
  for (int x = 0; x < 6; ++x) CHECK(g.out_arrows(x).size() == 2);

  // alternating generator walk visits every element exactly once
  std::vector<bool> seen(6, false);
  int x = 0;
  for (int step = 0; step < 6; ++step) {
    CHECK_FALSE(seen[x]);
    seen[x] = true;
    x = c.shift(x, step % 2);
  }
  CHECK(x == 0);
}

TEST_CASE("coefficient support is enforced") {
  CayleyCalculus c = z_calculus(5);
  XiCoeffs zero = zero_xi(c);
  CHECK(zero.n_gen == 2);
  CHECK(zero.order == 5);
  CHECK(max_abs(zero.xi) == 0.0);

  // slot (+, -, -) has product -3, neither a generator nor the identity
  XiCoeffs bad = zero;
  bad.at(0, 1, 1, 2) = 1.0;
  CHECK_THROWS_AS(make_xi(c, bad.xi), std::invalid_argument);

  // the same slot on Z3 is the identity product, hence allowed
  CayleyCalculus c3 = z_calculus(3);
  XiCoeffs ok = zero_xi(c3);
  ok.at(0, 1, 1, 2) = 1.0;
  CHECK_NOTHROW(make_xi(c3, ok.xi));
}

TEST_CASE("lattice coefficients pass the group-basis checks") {
  auto r = oracle::rng(51);
  for (int n : {5, 6, 9}) {
    std::vector<double> g = oracle::random_weights(r, n);
    std::vector<double> mu = oracle::random_weights(r, n);
    LatticeOps lat = lattice_from_metric(g, mu);
    CayleyCalculus c = z_calculus(n);
    CayleyMetric m = z_metric(c, lat);
    XiCoeffs xi = qlc_z(lat);
    CHECK(hermitian_check_cayley(c, m, xi) < 1e-12);
    CHECK(star_compat_cayley(c, xi) < 1e-12);
    CHECK(torsion_check_cayley(c, xi) < 1e-12);

    XiCoeffs bad = xi;
    bad.at(0, 0, 0, 1) += 0.3;
    CHECK(hermitian_check_cayley(c, m, bad) > 1e-3);
    CHECK(star_compat_cayley(c, bad) > 1e-3);
  }

  // on four sites the minimal two-forms kill too little: torsion obstructs
  std::vector<double> g4 = oracle::random_weights(r, 4);
  std::vector<double> mu4 = oracle::random_weights(r, 4);
  LatticeOps lat4 = lattice_from_metric(g4, mu4);
  CayleyCalculus c4 = z_calculus(4);
  XiCoeffs xi4 = qlc_z(lat4);
  CHECK(torsion_check_cayley(c4, xi4) > 1e-3);
  CHECK(hermitian_check_cayley(c4, z_metric(c4, lat4), xi4) < 1e-12);
}

TEST_CASE("dictionary to the graph engine") {
  auto r = oracle::rng(52);
  GroupSpec s3 = make_s3({1, 2});
  std::vector<CayleyCalculus> cases = {z_calculus(3), z_calculus(5),
                                       cayley_graph(s3)};
  for (const CayleyCalculus& c : cases) {
    const DirectedGraph& g = c.graph;
    const int n = c.group.order;
    const int ng = c.n_gen();
    const int na = g.n_arrows();

    XiCoeffs xi = random_xi(c, r);
    CayleyMetric m =
        make_cayley_metric(c, oracle::random_weights(r, ng * n));
    Connection conn = to_graph_connection(c, m, xi);
    std::vector<double> mu = random_mu(r, n);
    Measure gm = make_measure(g, mu);

    // metric translation
    for (int x = 0; x < n; ++x)
      for (int slot = 0; slot < ng; ++slot)
        CHECK(conn.metric.g[c.arrow_of[x * ng + slot]] ==
              doctest::Approx(m.g[static_cast<size_t>(slot) * n + x]));

    for (int t = 0; t < 5; ++t) {
      std::vector<cplx> X = random_cayley_field(r, c);
      VectorField Xg = to_graph_field(c, X);

      // covariant gradient of the field
      VectorFieldGradient grad = nabla_X_vf(conn, Xg);
      for (int x = 0; x < n; ++x)
        for (int a = 0; a < ng; ++a)
          for (int b = 0; b < ng; ++b) {
            cplx expected = -X[static_cast<size_t>(a) * n + x];
            int xb = c.shift(x, b);
            for (int d = 0; d < ng; ++d)
              expected += xi.at(a, b, d, x) *
                          X[static_cast<size_t>(d) * n + xb];
            cplx got = grad.coef[static_cast<size_t>(
                                     c.arrow_of[x * ng + a]) *
                                     na +
                                 c.arrow_of[x * ng + b]];
            CHECK(std::abs(got - expected) < 1e-12);
          }

      // divergences
      VertexFunction di_c = div_int_cayley(c, mu, X);
      VertexFunction di_g = div_int(g, gm, Xg);
      CHECK(max_abs(sub(di_c, di_g)) < 1e-12);
      VertexFunction dg_c = div_cayley(c, m, xi, X);
      VertexFunction dg_g = div_geometric(conn, Xg);
      CHECK(max_abs(sub(dg_c, dg_g)) < 1e-12);

      // reality defect
      CHECK(reality_defect_cayley(c, mu, X) ==
            doctest::Approx(reality_defect(g, gm, Xg)).epsilon(1e-12));

      // amplitude flow
      VertexFunction psi = oracle::random_function(r, n);
      VertexFunction am_c = amplitude_rhs_cayley(c, mu, X, psi);
      VertexFunction am_g = amplitude_rhs(g, gm, Xg, psi);
      CHECK(max_abs(sub(am_c, am_g)) < 1e-12);

      // velocity with the generated force substituted; the group-basis
      // stencil uses the reality condition to remove conjugated components,
      // so it only represents the flow on the real slice
      std::vector<cplx> Xr = random_real_cayley(r, c, mu);
      VectorField Xrg = to_graph_field(c, Xr);
      std::vector<cplx> v_c = velocity_rhs_cayley(c, xi, mu, Xr);
      VectorField F = driving_force(conn, gm, Xrg, 1e308);
      VectorField v_g = velocity_rhs(conn, gm, Xrg, F);
      for (int x = 0; x < n; ++x)
        for (int slot = 0; slot < ng; ++slot) {
          cplx lhs = v_c[static_cast<size_t>(slot) * n + x];
          cplx rhs = 2.0 * v_g.coef[c.arrow_of[x * ng + slot]];
          CHECK(std::abs(lhs - rhs) < 1e-12);
        }

      // braiding on function-valued tensors
      std::vector<cplx> tens =
          oracle::random_cplx_vector(r, static_cast<size_t>(ng) * ng * n);
      TwoTensor tg;
      tg.coef.assign(g.n_paths2(), 0.0);
      for (int x = 0; x < n; ++x)
        for (int a = 0; a < ng; ++a)
          for (int b = 0; b < ng; ++b) {
            int first = c.arrow_of[x * ng + a];
            int second = c.arrow_of[c.shift(x, a) * ng + b];
            tg.coef[g.path2_index(first, second)] =
                tens[(static_cast<size_t>(a) * ng + b) * n + x];
          }
      std::vector<cplx> sc = sigma_cayley(c, xi, tens);
      TwoTensor sg = sigma_apply(conn, tg);
      for (int x = 0; x < n; ++x)
        for (int a = 0; a < ng; ++a)
          for (int b = 0; b < ng; ++b) {
            int first = c.arrow_of[x * ng + a];
            int second = c.arrow_of[c.shift(x, a) * ng + b];
            CHECK(std::abs(sc[(static_cast<size_t>(a) * ng + b) * n + x] -
                           sg.coef[g.path2_index(first, second)]) < 1e-12);
          }
    }
  }
}

TEST_CASE("divergence compatibility and the field star") {
  auto r = oracle::rng(53);
  const int n = 6;
  CayleyCalculus c = z_calculus(n);

  // constant metric and measure: compatible
  LatticeOps lat = lattice_from_metric(std::vector<double>(n, 1.7),
                                       std::vector<double>(n, 1.0));
  CayleyMetric m = z_metric(c, lat);
  XiCoeffs xi = qlc_z(lat);
  std::vector<double> mu(n, 1.0);
  CHECK(div_compat_residual_cayley(c, m, xi, mu) < 1e-13);

  Measure gm = make_measure(c.graph, mu);
  Connection conn = to_graph_connection(c, m, xi);
  CHECK(div_compat_residual(conn, gm) < 1e-13);

  for (int t = 0; t < 10; ++t) {
    std::vector<cplx> X = random_cayley_field(r, c);
    // the two divergences agree when compatible
    CHECK(max_abs(sub(div_cayley(c, m, xi, X), div_int_cayley(c, mu, X))) <
          1e-12);
    // star matches the graph star and is an involution
    std::vector<cplx> Xs = star_vf_cayley(c, m, xi, X);
    VectorField gs = star_vf(conn, gm, to_graph_field(c, X));
    CHECK(max_abs(sub(Xs, from_graph_field(c, gs))) < 1e-12);
    CHECK(max_abs(sub(star_vf_cayley(c, m, xi, Xs), X)) < 1e-12);
  }
  std::vector<cplx> R = random_real_cayley(r, c, mu);
  CHECK(reality_defect_cayley(c, mu, R) < 1e-13);
  CHECK(max_abs(sub(star_vf_cayley(c, m, xi, R), R)) < 1e-12);

  // a varying profile breaks the compatibility
  LatticeOps vary = lattice_from_metric(oracle::random_weights(r, n),
                                        std::vector<double>(n, 1.0));
  CHECK(div_compat_residual_cayley(c, z_metric(c, vary), qlc_z(vary), mu) >
        1e-3);
}

TEST_CASE("inverse braiding in the group basis matches the graph residual") {
  auto r = oracle::rng(54);
  for (int n : {4, 5}) {
    CayleyCalculus c = z_calculus(n);
    XiCoeffs xi = random_xi(c, r);
    CayleyMetric m =
        make_cayley_metric(c, oracle::random_weights(r, 2 * n));
    Connection conn = to_graph_connection(c, m, xi);
    CHECK(star_compat_cayley(c, xi) ==
          doctest::Approx(star_compat_residual(conn)).epsilon(1e-10));
  }
}
