#include "qgeo/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qgeo {

LatticeOps lattice_from_metric(const std::vector<double>& g,
                               const std::vector<double>& mu) {
  const int n = static_cast<int>(g.size());
  if (n < 3) throw std::invalid_argument("lattice needs at least 3 sites");
  if (mu.size() != g.size())
    throw std::invalid_argument("measure does not match metric length");
  for (double w : g)
    if (w == 0.0 || !std::isfinite(w))
      throw std::invalid_argument("edge weights must be finite and nonzero");
  for (double m : mu)
    if (m <= 0.0 || !std::isfinite(m))
      throw std::invalid_argument("measure must be positive");
  LatticeOps lat;
  lat.n = n;
  lat.g = g;
  lat.mu = mu;
  lat.rho_plus.resize(n);
  lat.rho_minus.resize(n);
  lat.mu_plus.resize(n);
  lat.mu_minus.resize(n);
  for (int i = 0; i < n; ++i) {
    lat.rho_plus[i] = g[lat.wrap(i + 1)] / g[i];
    lat.rho_minus[i] = g[lat.wrap(i - 2)] / g[lat.wrap(i - 1)];
    lat.mu_plus[i] = mu[lat.wrap(i + 1)] / mu[i];
    lat.mu_minus[i] = mu[lat.wrap(i - 1)] / mu[i];
  }
  return lat;
}

LatticeOps lattice_flat(int n, double rho) {
  if (n < 3) throw std::invalid_argument("lattice needs at least 3 sites");
  if (rho <= 0.0 || !std::isfinite(rho))
    throw std::invalid_argument("ratio must be positive");
  LatticeOps lat;
  lat.n = n;
  lat.flat = true;
  lat.rho = rho;
  lat.rho_plus.assign(n, rho);
  lat.rho_minus.assign(n, 1.0 / rho);
  lat.mu_plus.assign(n, rho);
  lat.mu_minus.assign(n, 1.0 / rho);
  lat.g.resize(n);
  lat.mu.resize(n);
  for (int i = 0; i < n; ++i) {
    lat.g[i] = std::pow(rho, i);
    lat.mu[i] = lat.g[i];
  }
  return lat;
}

std::vector<double> cosine_dip_metric(int n) {
  if (n < 3) throw std::invalid_argument("lattice needs at least 3 sites");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    double u = (i - 50.0) / 25.0;
    double window = 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi *
                                          (i - 50.0) / n));
    g[i] = 1.0 - 0.8 * std::exp(-u * u) * window;
  }
  return g;
}

CayleyCalculus z_calculus(int n) { return cayley_graph(cyclic_group(n)); }

CayleyMetric z_metric(const CayleyCalculus& c, const LatticeOps& lat) {
  if (c.group.order != lat.n)
    throw std::invalid_argument("group order does not match lattice");
  std::vector<double> w(static_cast<size_t>(2) * lat.n);
  for (int i = 0; i < lat.n; ++i) {
    w[i] = lat.g[i];
    w[lat.n + i] = lat.g[lat.wrap(i - 1)];
  }
  return make_cayley_metric(c, std::move(w));
}

XiCoeffs qlc_z(const LatticeOps& lat) {
  XiCoeffs xi;
  xi.n_gen = 2;
  xi.order = lat.n;
  xi.xi.assign(static_cast<size_t>(8) * lat.n, 0.0);
  for (int i = 0; i < lat.n; ++i) {
    xi.at(0, 0, 0, i) = lat.rho_plus[i];
    xi.at(0, 1, 0, i) = 1.0;
    xi.at(1, 1, 1, i) = lat.rho_minus[i];
    xi.at(1, 0, 1, i) = 1.0;
  }
  return xi;
}

static void check_packed(const LatticeOps& lat, const std::vector<cplx>& X) {
  if (X.size() != static_cast<size_t>(2) * lat.n)
    throw std::invalid_argument("packed field must have 2n components");
}

std::vector<cplx> velocity_rhs_z(const LatticeOps& lat,
                                 const std::vector<cplx>& X) {
  check_packed(lat, X);
  const int n = lat.n;
  std::vector<cplx> out(X.size());
  auto xp = [&](int i) { return X[lat.wrap(i)]; };
  auto xm = [&](int i) { return X[n + lat.wrap(i)]; };
  for (int i = 0; i < n; ++i) {
    int ip = lat.wrap(i + 1);
    int im = lat.wrap(i - 1);
    out[i] = (lat.mu_minus[i] * lat.rho_minus[ip] * xp(i - 1) -
              lat.rho_plus[i] * xp(i + 1) +
              (1.0 - 1.0 / lat.mu_plus[i]) * xp(i)) *
                 xp(i) +
             (lat.mu_plus[i] * xp(i + 1) - lat.mu_plus[ip] * xp(i)) *
                 xm(i + 2) -
             (xp(i - 1) - xp(i)) * xm(i);
    out[n + i] = (lat.mu_plus[i] * lat.rho_plus[im] * xm(i + 1) -
                  lat.rho_minus[i] * xm(i - 1) +
                  (1.0 - 1.0 / lat.mu_minus[i]) * xm(i)) *
                     xm(i) +
                 (lat.mu_minus[i] * xm(i - 1) - lat.mu_minus[im] * xm(i)) *
                     xp(i - 2) -
                 (xm(i + 1) - xm(i)) * xp(i);
  }
  return out;
}

static void require_uniform_measure(const LatticeOps& lat) {
  for (int i = 0; i < lat.n; ++i)
    if (std::abs(lat.mu_plus[i] - 1.0) > 1e-12 ||
        std::abs(lat.mu_minus[i] - 1.0) > 1e-12)
      throw std::invalid_argument("reduced stencil needs a uniform measure");
}

std::vector<double> velocity_rhs_real(const LatticeOps& lat,
                                      const std::vector<double>& xp) {
  if (static_cast<int>(xp.size()) != lat.n)
    throw std::invalid_argument("field must have n components");
  require_uniform_measure(lat);
  const int n = lat.n;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double xl = xp[lat.wrap(i - 1)];
    double xr = xp[lat.wrap(i + 1)];
    double inv_rho_l = 1.0 / lat.rho_plus[lat.wrap(i - 1)];
    out[i] = 0.5 * ((inv_rho_l - 1.0) * xl + (1.0 - lat.rho_plus[i]) * xr) *
                 xp[i] +
             0.5 * (xl * xl - xr * xr);
  }
  return out;
}

std::vector<double> velocity_rhs_flat(const LatticeOps& lat,
                                      const std::vector<double>& xp) {
  if (!lat.flat)
    throw std::invalid_argument("flat stencil needs a constant-ratio lattice");
  if (static_cast<int>(xp.size()) != lat.n)
    throw std::invalid_argument("field must have n components");
  const int n = lat.n;
  const double rho = lat.rho;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double xl = xp[lat.wrap(i - 1)];
    double xr = xp[lat.wrap(i + 1)];
    out[i] = 0.5 * (1.0 - rho) * (xl / (rho * rho) + xr - xp[i] / rho) * xp[i] +
             0.5 * (xl * xl / rho - xr * xr);
  }
  return out;
}

std::vector<cplx> div_z(const LatticeOps& lat, const std::vector<cplx>& X) {
  check_packed(lat, X);
  const int n = lat.n;
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = X[i] + X[n + i] - lat.mu_minus[i] * X[lat.wrap(i - 1)] -
             lat.mu_plus[i] * X[n + lat.wrap(i + 1)];
  return out;
}

std::vector<cplx> amplitude_rhs_z(const LatticeOps& lat,
                                  const std::vector<cplx>& X,
                                  const std::vector<cplx>& psi) {
  check_packed(lat, X);
  if (static_cast<int>(psi.size()) != lat.n)
    throw std::invalid_argument("amplitude must have n components");
  const int n = lat.n;
  std::vector<cplx> div = div_z(lat, X);
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = -(psi[lat.wrap(i + 1)] - psi[i]) * X[i] -
             (psi[lat.wrap(i - 1)] - psi[i]) * X[n + i] -
             0.5 * psi[i] * div[i];
  return out;
}

std::vector<cplx> amplitude_rhs_real(const LatticeOps& lat,
                                     const std::vector<double>& xp,
                                     const std::vector<cplx>& psi) {
  if (static_cast<int>(xp.size()) != lat.n ||
      static_cast<int>(psi.size()) != lat.n)
    throw std::invalid_argument("field and amplitude must have n components");
  require_uniform_measure(lat);
  const int n = lat.n;
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = -psi[lat.wrap(i + 1)] * xp[i] +
             psi[lat.wrap(i - 1)] * xp[lat.wrap(i - 1)];
  return out;
}

std::vector<cplx> amplitude_rhs_flat(const LatticeOps& lat,
                                     const std::vector<double>& xp,
                                     const std::vector<cplx>& psi) {
  if (!lat.flat)
    throw std::invalid_argument("flat stencil needs a constant-ratio lattice");
  if (static_cast<int>(xp.size()) != lat.n ||
      static_cast<int>(psi.size()) != lat.n)
    throw std::invalid_argument("field and amplitude must have n components");
  const int n = lat.n;
  std::vector<cplx> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = -psi[lat.wrap(i + 1)] * xp[i] +
             psi[lat.wrap(i - 1)] * xp[lat.wrap(i - 1)] / lat.rho;
  return out;
}

double reality_defect_z(const LatticeOps& lat, const std::vector<cplx>& X) {
  check_packed(lat, X);
  const int n = lat.n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    cplx plus = std::conj(X[i]) + X[n + lat.wrap(i + 1)] * lat.mu_plus[i];
    cplx minus = std::conj(X[n + i]) + X[lat.wrap(i - 1)] * lat.mu_minus[i];
    worst = std::max({worst, std::abs(plus), std::abs(minus)});
  }
  return worst;
}

int sign_alternations(const std::vector<double>& xp, double eps) {
  const int n = static_cast<int>(xp.size());
  int count = 0;
  int last = 0;
  for (int i = 0; i < n; ++i) {
    double d = xp[(i + 1) % n] - xp[i];
    if (std::abs(d) <= eps) continue;
    int sign = d > 0 ? 1 : -1;
    if (last != 0 && sign != last) ++count;
    last = sign;
  }
  return count;
}

double seam_mass(const std::vector<double>& weights,
                 const std::vector<cplx>& psi, int band) {
  const int n = static_cast<int>(psi.size());
  if (weights.size() != psi.size())
    throw std::invalid_argument("weights do not match amplitude");
  double mass = 0.0;
  for (int k = 0; k < band && k < n; ++k) {
    mass += weights[k] * std::norm(psi[k]);
    if (n - 1 - k >= band)
      mass += weights[n - 1 - k] * std::norm(psi[n - 1 - k]);
  }
  return mass;
}

static double gaussian(double i, double center, double width) {
  double u = (i - center) / width;
  return std::exp(-0.5 * u * u);
}

static std::vector<cplx> normalized_packet(int n, double center, double width,
                                           const std::vector<double>& w) {
  std::vector<cplx> psi(n);
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = gaussian(i, center, width);
    psi[i] = v;
    mass += w[i] * v * v;
  }
  double scale = 1.0 / std::sqrt(mass);
  for (auto& p : psi) p *= scale;
  return psi;
}

LatticeScenario cosine_dip_scenario(int n, double x_center, double psi_center,
                                    double width, double amplitude, double ds,
                                    long steps, int record_stride) {
  LatticeScenario sc;
  sc.name = "cosine_dip";
  sc.lattice = lattice_from_metric(cosine_dip_metric(n),
                                   std::vector<double>(n, 1.0));
  sc.mode = LatticeMode::general;
  sc.weights.assign(n, 1.0);
  sc.x0.assign(static_cast<size_t>(2) * n, 0.0);
  for (int i = 0; i < n; ++i)
    sc.x0[i] = amplitude * gaussian(i, x_center, width);
  for (int i = 0; i < n; ++i)
    sc.x0[n + i] = -sc.x0[sc.lattice.wrap(i - 1)];
  sc.psi0 = normalized_packet(n, psi_center, width, sc.weights);
  sc.ds = ds;
  sc.steps = steps;
  sc.record_stride = record_stride;
  return sc;
}

LatticeScenario exponential_scenario(int n, double rho, double x_center,
                                     double psi_center, double width,
                                     double amplitude, double ds, long steps,
                                     int record_stride) {
  LatticeScenario sc;
  sc.name = "exponential";
  sc.lattice = lattice_flat(n, rho);
  sc.mode = LatticeMode::general;
  sc.weights = sc.lattice.mu;
  sc.x0.assign(static_cast<size_t>(2) * n, 0.0);
  for (int i = 0; i < n; ++i)
    sc.x0[i] = amplitude * gaussian(i, x_center, width);
  for (int i = 0; i < n; ++i)
    sc.x0[n + i] = -sc.x0[sc.lattice.wrap(i - 1)] / rho;
  sc.psi0 = normalized_packet(n, psi_center, width, sc.weights);
  sc.ds = ds;
  sc.steps = steps;
  sc.record_stride = record_stride;
  return sc;
}

namespace {

struct LatticeState {
  std::vector<cplx> x;  // packed (general) or n real components (reduced)
  std::vector<cplx> psi;
};

LatticeState axpy(const LatticeState& y, double h, const LatticeState& d) {
  LatticeState out = y;
  for (size_t k = 0; k < out.x.size(); ++k) out.x[k] += h * d.x[k];
  for (size_t k = 0; k < out.psi.size(); ++k) out.psi[k] += h * d.psi[k];
  return out;
}

std::vector<double> real_part(const std::vector<cplx>& v) {
  std::vector<double> out(v.size());
  for (size_t k = 0; k < v.size(); ++k) out[k] = v[k].real();
  return out;
}

}  // namespace

LatticeRunResult evolve_lattice(const LatticeScenario& sc) {
  if (sc.steps <= 0) throw std::invalid_argument("steps must be positive");
  if (sc.ds <= 0.0) throw std::invalid_argument("step size must be positive");
  if (sc.record_stride <= 0)
    throw std::invalid_argument("record stride must be positive");
  const LatticeOps& lat = sc.lattice;
  const int n = lat.n;
  if (static_cast<int>(sc.psi0.size()) != n ||
      static_cast<int>(sc.weights.size()) != n)
    throw std::invalid_argument("scenario arrays do not match lattice size");
  check_packed(lat, sc.x0);

  const bool reduced = sc.mode != LatticeMode::general;
  LatticeState state;
  if (reduced) {
    state.x.resize(n);
    for (int i = 0; i < n; ++i) state.x[i] = sc.x0[i].real();
  } else {
    state.x = sc.x0;
  }
  state.psi = sc.psi0;

  auto deriv = [&](const LatticeState& y) {
    LatticeState d;
    if (sc.mode == LatticeMode::general) {
      d.x = velocity_rhs_z(lat, y.x);
      for (auto& v : d.x) v *= 0.5;
      d.psi = amplitude_rhs_z(lat, y.x, y.psi);
    } else {
      std::vector<double> xp = real_part(y.x);
      std::vector<double> dx = sc.mode == LatticeMode::real
                                   ? velocity_rhs_real(lat, xp)
                                   : velocity_rhs_flat(lat, xp);
      d.x.assign(n, 0.0);
      for (int i = 0; i < n; ++i) d.x[i] = dx[i];
      d.psi = sc.mode == LatticeMode::real
                  ? amplitude_rhs_real(lat, xp, y.psi)
                  : amplitude_rhs_flat(lat, xp, y.psi);
    }
    return d;
  };

  auto packed_field = [&](const LatticeState& y) {
    if (!reduced) return y.x;
    std::vector<cplx> X(static_cast<size_t>(2) * n, 0.0);
    for (int i = 0; i < n; ++i) X[i] = y.x[i];
    double scale = sc.mode == LatticeMode::flat ? 1.0 / lat.rho : 1.0;
    for (int i = 0; i < n; ++i)
      X[n + i] = -X[lat.wrap(i - 1)] * scale;
    return X;
  };

  auto mass_of = [&](const LatticeState& y) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m += sc.weights[i] * std::norm(y.psi[i]);
    return m;
  };

  auto finite = [](const LatticeState& y) {
    for (const cplx& v : y.x)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    for (const cplx& v : y.psi)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  };

  LatticeRunResult result;
  const double mass0 = mass_of(state);

  auto observe = [&](const LatticeState& y) {
    result.max_mass_drift =
        std::max(result.max_mass_drift, std::abs(mass_of(y) - mass0));
    double im = 0.0;
    for (int i = 0; i < n; ++i)
      im = std::max(im, std::abs(reduced ? 0.0 : y.x[i].imag()));
    result.max_imag_xplus = std::max(result.max_imag_xplus, im);
    result.max_seam_mass =
        std::max(result.max_seam_mass, seam_mass(sc.weights, y.psi));
  };

  auto record = [&](double s, const LatticeState& y) {
    TrajectoryRow row;
    row.s = s;
    row.X.coef = packed_field(y);
    row.psi = y.psi;
    row.prob_mass = mass_of(y);
    row.reality_defect = reduced ? 0.0 : reality_defect_z(lat, row.X.coef);
    result.rows.push_back(std::move(row));
  };

  observe(state);
  record(0.0, state);

  for (long step = 1; step <= sc.steps; ++step) {
    LatticeState k1 = deriv(state);
    LatticeState k2 = deriv(axpy(state, 0.5 * sc.ds, k1));
    LatticeState k3 = deriv(axpy(state, 0.5 * sc.ds, k2));
    LatticeState k4 = deriv(axpy(state, sc.ds, k3));
    LatticeState next = state;
    for (size_t k = 0; k < next.x.size(); ++k)
      next.x[k] += sc.ds / 6.0 *
                   (k1.x[k] + 2.0 * k2.x[k] + 2.0 * k3.x[k] + k4.x[k]);
    for (size_t k = 0; k < next.psi.size(); ++k)
      next.psi[k] += sc.ds / 6.0 *
                     (k1.psi[k] + 2.0 * k2.psi[k] + 2.0 * k3.psi[k] +
                      k4.psi[k]);

    double cap = 0.0;
    for (const cplx& v : next.x) cap = std::max(cap, std::abs(v));
    if (!finite(next) || cap > sc.blowup_cap) {
      result.status = EvolveStatus::blowup;
      result.s_end = (step - 1) * sc.ds;
      result.steps_done = step - 1;
      result.message = "blowup detected at s = " + std::to_string(step * sc.ds);
      if (result.rows.empty() || result.rows.back().s != result.s_end)
        record(result.s_end, state);
      return result;
    }
    state = std::move(next);
    observe(state);
    if (step % sc.record_stride == 0 || step == sc.steps)
      record(step * sc.ds, state);
  }
  result.status = EvolveStatus::ok;
  result.s_end = sc.steps * sc.ds;
  result.steps_done = sc.steps;
  return result;
}

}  // namespace qgeo
