#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oracles.hpp"
#include "qgeo/lattice.hpp"

using namespace qgeo;

namespace {

std::vector<cplx> random_packed(std::mt19937_64& r, int n) {
  return oracle::random_cplx_vector(r, 2 * n);
}

// Packed field on the real uniform-measure slice: X^-(i) = -X^+(i-1).
std::vector<cplx> packed_from_real(const LatticeOps& lat,
                                   const std::vector<double>& xp,
                                   double scale = 1.0) {
  const int n = lat.n;
  std::vector<cplx> X(static_cast<size_t>(2) * n, 0.0);
  for (int i = 0; i < n; ++i) X[i] = xp[i];
  for (int i = 0; i < n; ++i) X[n + i] = -xp[lat.wrap(i - 1)] / scale;
  return X;
}

std::vector<double> random_reals(std::mt19937_64& r, int n) {
  std::vector<double> out(n);
  for (double& v : out) v = oracle::random_cplx(r).real();
  return out;
}

}  // namespace

TEST_CASE("ratio arrays and validation") {
  std::vector<double> g = {1.0, 2.0, 4.0, 0.5};
  std::vector<double> mu = {1.0, 3.0, 2.0, 5.0};
  LatticeOps lat = lattice_from_metric(g, mu);
  CHECK(lat.n == 4);
  CHECK_FALSE(lat.flat);
  for (int i = 0; i < 4; ++i) {
    CHECK(lat.rho_plus[i] ==
          doctest::Approx(g[(i + 1) % 4] / g[i]).epsilon(1e-14));
    CHECK(lat.rho_minus[i] ==
          doctest::Approx(g[(i + 2) % 4] / g[(i + 3) % 4]).epsilon(1e-14));
    CHECK(lat.mu_plus[i] ==
          doctest::Approx(mu[(i + 1) % 4] / mu[i]).epsilon(1e-14));
    CHECK(lat.mu_minus[i] ==
          doctest::Approx(mu[(i + 3) % 4] / mu[i]).epsilon(1e-14));
  }
  CHECK(lat.wrap(-1) == 3);
  CHECK(lat.wrap(4) == 0);

  CHECK_THROWS_AS(lattice_from_metric({1.0, 2.0}, {1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(lattice_from_metric({1.0, 0.0, 1.0}, {1.0, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(lattice_from_metric({1.0, 1.0, 1.0}, {1.0, -1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(lattice_from_metric({1.0, 1.0, 1.0}, {1.0, 1.0}),
                  std::invalid_argument);

  LatticeOps flat = lattice_flat(8, 1.5);
  CHECK(flat.flat);
  CHECK(flat.rho == doctest::Approx(1.5));
  for (int i = 0; i < 8; ++i) {
    CHECK(flat.rho_plus[i] == doctest::Approx(1.5));
    CHECK(flat.rho_minus[i] == doctest::Approx(1.0 / 1.5));
    CHECK(flat.mu_plus[i] == doctest::Approx(1.5));
    CHECK(flat.mu_minus[i] == doctest::Approx(1.0 / 1.5));
  }
  CHECK_THROWS_AS(lattice_flat(8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lattice_flat(2, 1.5), std::invalid_argument);
}

TEST_CASE("dip profile") {
  const int n = 128;
  std::vector<double> g = cosine_dip_metric(n);
  CHECK(g[50] == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(g[114] == doctest::Approx(1.0).epsilon(1e-14));
  double mn = 1e9;
  int arg = -1;
  for (int i = 0; i < n; ++i) {
    CHECK(g[i] > 0.0);
    CHECK(g[i] <= 1.0 + 1e-14);
    if (g[i] < mn) {
      mn = g[i];
      arg = i;
    }
    double u = (i - 50.0) / 25.0;
    double window =
        0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * (i - 50.0) / n));
    CHECK(g[i] ==
          doctest::Approx(1.0 - 0.8 * std::exp(-u * u) * window)
              .epsilon(1e-14));
  }
  CHECK(arg == 50);
}

TEST_CASE("packed velocity agrees with the group engine") {
  auto r = oracle::rng(61);
  const int n = 12;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> g = oracle::random_weights(r, n);
    std::vector<double> mu = oracle::random_weights(r, n);
    LatticeOps lat = lattice_from_metric(g, mu);
    CayleyCalculus c = z_calculus(n);
    XiCoeffs xi = qlc_z(lat);
    for (int t = 0; t < 5; ++t) {
      std::vector<cplx> X = random_packed(r, n);
      std::vector<cplx> zs = velocity_rhs_z(lat, X);
      std::vector<cplx> cs = velocity_rhs_cayley(c, xi, lat.mu, X);
      REQUIRE(zs.size() == cs.size());
      for (size_t k = 0; k < zs.size(); ++k)
        CHECK(std::abs(zs[k] + cs[k]) < 1e-12);

      CHECK(max_abs(sub(div_z(lat, X), div_int_cayley(c, lat.mu, X))) <
            1e-12);
      CHECK(reality_defect_z(lat, X) ==
            doctest::Approx(reality_defect_cayley(c, lat.mu, X))
                .epsilon(1e-12));

      VertexFunction psi = oracle::random_function(r, n);
      CHECK(max_abs(sub(amplitude_rhs_z(lat, X, psi),
                        amplitude_rhs_cayley(c, lat.mu, X, psi))) < 1e-12);
    }
  }
}

TEST_CASE("real-slice reduction") {
  auto r = oracle::rng(62);
  const int n = 16;
  std::vector<double> g = oracle::random_weights(r, n);
  LatticeOps lat = lattice_from_metric(g, std::vector<double>(n, 1.0));
  for (int t = 0; t < 5; ++t) {
    std::vector<double> xp = random_reals(r, n);
    std::vector<cplx> X = packed_from_real(lat, xp);
    CHECK(reality_defect_z(lat, X) < 1e-14);

    std::vector<cplx> zs = velocity_rhs_z(lat, X);
    std::vector<double> rr = velocity_rhs_real(lat, xp);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(zs[i] - cplx(2.0 * rr[i], 0.0)) < 1e-12);
      // the stencil transports the reality condition
      CHECK(std::abs(zs[n + i] + zs[lat.wrap(i - 1)]) < 1e-12);
    }

    VertexFunction psi = oracle::random_function(r, n);
    VertexFunction ar = amplitude_rhs_real(lat, xp, psi);
    VertexFunction az = amplitude_rhs_z(lat, X, psi);
    CHECK(max_abs(sub(ar, az)) < 1e-12);

    // quadratic mass is exactly conserved on the real slice
    VertexFunction rhs = amplitude_rhs_z(lat, X, psi);
    double dd = 0.0;
    for (int i = 0; i < n; ++i)
      dd += lat.mu[i] * 2.0 * std::real(std::conj(psi[i]) * rhs[i]);
    CHECK(std::abs(dd) < 1e-12);
  }
  // the reduced stencil rejects a varying measure
  LatticeOps vary =
      lattice_from_metric(g, oracle::random_weights(r, n));
  CHECK_THROWS_AS(velocity_rhs_real(vary, random_reals(r, n)),
                  std::invalid_argument);
}

TEST_CASE("flat-slice reduction") {
  auto r = oracle::rng(63);
  const int n = 16;
  const double rho = 1.3;
  LatticeOps lat = lattice_flat(n, rho);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> xp = random_reals(r, n);
    std::vector<cplx> X = packed_from_real(lat, xp, rho);
    CHECK(reality_defect_z(lat, X) < 1e-13);

    std::vector<cplx> zs = velocity_rhs_z(lat, X);
    std::vector<double> rf = velocity_rhs_flat(lat, xp);
    for (int i = 0; i < n; ++i)
      CHECK(std::abs(zs[i] - cplx(2.0 * rf[i], 0.0)) < 1e-12);

    VertexFunction psi = oracle::random_function(r, n);
    CHECK(max_abs(sub(amplitude_rhs_flat(lat, xp, psi),
                      amplitude_rhs_z(lat, X, psi))) < 1e-12);

    // mass against the rho^i weights is conserved when nothing reaches the
    // seam, where the reference profile is discontinuous
    std::vector<double> xp_in(n, 0.0);
    VertexFunction psi_in(n, 0.0);
    for (int i = 4; i <= 11; ++i) {
      xp_in[i] = xp[i];
      psi_in[i] = psi[i];
    }
    std::vector<cplx> X_in = packed_from_real(lat, xp_in, rho);
    VertexFunction rhs = amplitude_rhs_z(lat, X_in, psi_in);
    double dd = 0.0;
    for (int i = 0; i < n; ++i)
      dd += lat.mu[i] * 2.0 * std::real(std::conj(psi_in[i]) * rhs[i]);
    CHECK(std::abs(dd) < 1e-12);
  }
  CHECK_THROWS_AS(
      velocity_rhs_flat(lattice_from_metric(oracle::random_weights(r, n),
                                            std::vector<double>(n, 1.0)),
                        random_reals(r, n)),
      std::invalid_argument);
}

TEST_CASE("diagnostics helpers") {
  CHECK(sign_alternations({1.0, -1.0, 1.0, -1.0}) == 3);
  CHECK(sign_alternations({0.0, 1.0, 2.0, 3.0}) == 1);
  CHECK(sign_alternations({1.0, 1.0, 1.0, 1.0}) == 0);
  CHECK(sign_alternations({0.0, 1e-12, 0.0, 1e-12}) == 0);

  const int n = 128;
  std::vector<double> w(n, 1.0);
  std::vector<cplx> psi(n, 0.0);
  psi[0] = 1.0;
  CHECK(seam_mass(w, psi) == doctest::Approx(1.0));
  psi[0] = 0.0;
  psi[64] = 1.0;
  CHECK(seam_mass(w, psi) == doctest::Approx(0.0));
  psi[64] = 0.0;
  psi[n - 1] = 2.0;
  CHECK(seam_mass(w, psi) == doctest::Approx(4.0));
  psi[n - 1] = 0.0;
  psi[9] = 1.0;
  psi[10] = 1.0;
  CHECK(seam_mass(w, psi) == doctest::Approx(1.0));
  // a full band counts each site exactly once
  std::vector<cplx> full(n, 1.0);
  CHECK(seam_mass(w, full, n) == doctest::Approx(double(n)));
}

TEST_CASE("scenario construction") {
  LatticeScenario dip = cosine_dip_scenario();
  CHECK(dip.lattice.n == 128);
  CHECK(dip.mode == LatticeMode::general);
  REQUIRE(dip.x0.size() == 256);
  REQUIRE(dip.psi0.size() == 128);
  CHECK(reality_defect_z(dip.lattice, dip.x0) < 1e-14);
  double mass = 0.0;
  for (int i = 0; i < 128; ++i)
    mass += dip.weights[i] * std::norm(dip.psi0[i]);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  // field packet: amplitude 0.5 at site 40, falls off with width 5
  CHECK(dip.x0[40].real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(dip.x0[40 + 20]) < 0.5 * std::exp(-7.9));
  CHECK(dip.x0[40].imag() == 0.0);

  LatticeScenario exp2 = exponential_scenario(64, 2.0);
  CHECK(exp2.lattice.flat);
  CHECK(exp2.lattice.rho == doctest::Approx(2.0));
  CHECK(reality_defect_z(exp2.lattice, exp2.x0) < 1e-13);
  double m2 = 0.0;
  for (int i = 0; i < 64; ++i)
    m2 += exp2.weights[i] * std::norm(exp2.psi0[i]);
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 64; ++i)
    CHECK(exp2.weights[i] ==
          doctest::Approx(std::pow(2.0, double(i))).epsilon(1e-12));
}

TEST_CASE("reduced and general integrations coincide on their slice") {
  LatticeScenario a = cosine_dip_scenario(128, 40, 40, 5, 0.5, 1e-3, 200, 200);
  LatticeScenario b = a;
  b.mode = LatticeMode::real;
  LatticeRunResult ra = evolve_lattice(a);
  LatticeRunResult rb = evolve_lattice(b);
  REQUIRE(ra.status == EvolveStatus::ok);
  REQUIRE(rb.status == EvolveStatus::ok);
  REQUIRE(ra.rows.size() == rb.rows.size());
  const auto& xa = ra.rows.back().X.coef;
  const auto& xb = rb.rows.back().X.coef;
  REQUIRE(xa.size() == xb.size());
  for (size_t k = 0; k < xa.size(); ++k) CHECK(std::abs(xa[k] - xb[k]) < 1e-10);
  CHECK(max_abs(sub(ra.rows.back().psi, rb.rows.back().psi)) < 1e-10);
  CHECK(ra.max_mass_drift < 1e-10);
  CHECK(rb.max_mass_drift < 1e-10);
  CHECK(ra.max_imag_xplus < 1e-12);

  LatticeScenario c = exponential_scenario(64, 1.3, 40, 40, 5, 0.05, 1e-3,
                                           200, 200);
  LatticeScenario d = c;
  d.mode = LatticeMode::flat;
  LatticeRunResult rc = evolve_lattice(c);
  LatticeRunResult rd = evolve_lattice(d);
  REQUIRE(rc.status == EvolveStatus::ok);
  REQUIRE(rd.status == EvolveStatus::ok);
  const auto& xc = rc.rows.back().X.coef;
  const auto& xd = rd.rows.back().X.coef;
  for (size_t k = 0; k < xc.size(); ++k) CHECK(std::abs(xc[k] - xd[k]) < 1e-10);
  CHECK(max_abs(sub(rc.rows.back().psi, rd.rows.back().psi)) < 1e-10);
}

TEST_CASE("run bookkeeping") {
  LatticeScenario sc = cosine_dip_scenario(128, 40, 40, 5, 0.5, 1e-3, 100, 30);
  LatticeRunResult res = evolve_lattice(sc);
  REQUIRE(res.status == EvolveStatus::ok);
  CHECK(res.steps_done == 100);
  CHECK(res.s_end == doctest::Approx(0.1));
  // rows at 0, 30, 60, 90, 100
  REQUIRE(res.rows.size() == 5);
  CHECK(res.rows[1].s == doctest::Approx(0.03));
  CHECK(res.rows.back().s == doctest::Approx(0.1));
  for (const TrajectoryRow& row : res.rows)
    CHECK(row.reality_defect < 1e-10);

  // artificial cap exercises the blowup branch
  LatticeScenario capped = sc;
  capped.blowup_cap = 0.1;
  LatticeRunResult bad = evolve_lattice(capped);
  CHECK(bad.status == EvolveStatus::blowup);
  CHECK(bad.steps_done == 0);
  CHECK(bad.s_end == 0.0);
  CHECK(bad.message.find("blowup detected at s = ") == 0);
  REQUIRE(bad.rows.size() == 1);

  LatticeScenario malformed = sc;
  malformed.steps = 0;
  CHECK_THROWS_AS(evolve_lattice(malformed), std::invalid_argument);
  malformed = sc;
  malformed.psi0.pop_back();
  CHECK_THROWS_AS(evolve_lattice(malformed), std::invalid_argument);
  malformed = sc;
  malformed.x0.pop_back();
  CHECK_THROWS_AS(evolve_lattice(malformed), std::invalid_argument);
}
