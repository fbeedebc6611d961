#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qgeo/io.hpp"
#include "qgeo/lattice.hpp"
#include "qgeo/star.hpp"

namespace fs = std::filesystem;
using namespace qgeo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFail = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitUsage = 64;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

std::string status_name(EvolveStatus s) {
  switch (s) {
    case EvolveStatus::ok: return "ok";
    case EvolveStatus::blowup: return "blowup";
    case EvolveStatus::reality_loss: return "reality_loss";
  }
  return "unknown";
}

int status_exit(EvolveStatus s) {
  switch (s) {
    case EvolveStatus::ok: return kExitOk;
    case EvolveStatus::blowup: return kExitBlowup;
    case EvolveStatus::reality_loss: return kExitCheckFail;
  }
  return kExitCheckFail;
}

struct SolveArgs {
  int star_n = 0;
  std::vector<double> legs;
  std::string lattice_file;
  std::string out_dir;
  double tol = 1e-8;
};

int run_solve(const SolveArgs& a) {
  if ((a.star_n > 0) == !a.lattice_file.empty()) {
    std::cerr << "give exactly one of --star or --lattice\n";
    return kExitUsage;
  }
  if (a.star_n > 0) {
    std::vector<double> legs =
        a.legs.empty() ? std::vector<double>(a.star_n, 1.0) : a.legs;
    if (static_cast<int>(legs.size()) != a.star_n) {
      std::cerr << "--legs needs exactly " << a.star_n << " values\n";
      return kExitUsage;
    }
    std::vector<StarSolution> sols = solve_star(a.star_n, legs);
    if (sols.empty()) {
      std::cout << "no compatible phase for " << a.star_n << " legs\n";
      return kExitCheckFail;
    }
    if (!a.out_dir.empty()) fs::create_directories(a.out_dir);
    for (size_t k = 0; k < sols.size(); ++k) {
      const StarSolution& sol = sols[k];
      QlcResidual q = qlc_residual(sol.connection);
      std::printf(
          "solution %zu: phase = (%.17g, %.17g), hermitian %.3e, "
          "metric %.3e, torsion %.3e, star %.3e, inverse-braiding %.3e\n",
          k, sol.phase.real(), sol.phase.imag(),
          hermitian_residual(sol.connection), q.metric, q.torsion, q.star,
          star_compat_residual(sol.connection));
      if (!a.out_dir.empty()) {
        json j{{"phase", cplx_to_json(sol.phase)},
               {"connection", connection_to_json(sol.connection)}};
        write_json(fs::path(a.out_dir) /
                       ("solution_" + std::to_string(k) + ".json"),
                   j);
      }
    }
    return kExitOk;
  }

  json mj = load_json(a.lattice_file);
  std::vector<double> g = mj.at("g").get<std::vector<double>>();
  std::vector<double> mu =
      mj.value("mu", std::vector<double>(g.size(), 1.0));
  LatticeOps lat = lattice_from_metric(g, mu);
  CayleyCalculus calc = z_calculus(lat.n);
  CayleyMetric metric = z_metric(calc, lat);
  XiCoeffs xi = qlc_z(lat);
  json report = xi_report(calc, metric, xi, mu);
  const json& res = report.at("residuals");
  std::printf(
      "lattice with %d sites: hermitian %.3e, star %.3e, torsion %.3e, "
      "divergence %.3e\n",
      lat.n, res.at("hermitian").get<double>(),
      res.at("star_compat").get<double>(), res.at("torsion").get<double>(),
      res.at("div_compat").get<double>());
  if (!a.out_dir.empty()) {
    fs::create_directories(a.out_dir);
    write_json(fs::path(a.out_dir) / "xi.json", report);
  } else {
    std::cout << report.dump(2) << '\n';
  }
  for (const auto& [key, value] : res.items())
    if (value.get<double>() > a.tol) {
      std::cerr << "residual " << key << " exceeds tolerance\n";
      return kExitCheckFail;
    }
  return kExitOk;
}

struct CheckArgs {
  std::string config;
  double tol = 1e-10;
};

int run_check(const CheckArgs& a) {
  Connection c = connection_from_json(load_json(a.config));
  WorstConfig h = hermitian_worst(c);
  QlcResidual q = qlc_residual(c);
  double braid = star_compat_residual(c);

  auto arrow_name = [&](int id) {
    return std::to_string(c.graph.arrow(id).src) + "->" +
           std::to_string(c.graph.arrow(id).dst);
  };
  std::printf("hermitian residual      %.3e", h.residual);
  if (h.residual > a.tol && h.square >= 0)
    std::printf("  at square L[%s, %s]",
                arrow_name(c.configs.squares[h.square].row).c_str(),
                arrow_name(c.configs.squares[h.square].col).c_str());
  if (h.residual > a.tol && h.triangle >= 0)
    std::printf("  at triangle N[%s, %s]",
                arrow_name(c.configs.triangles[h.triangle].row).c_str(),
                arrow_name(c.configs.triangles[h.triangle].col).c_str());
  std::printf("\n");
  std::printf("metric residual         %.3e\n", q.metric);
  std::printf("torsion residual        %.3e\n", q.torsion);
  std::printf("star-preserving residual %.3e\n", q.star);
  std::printf("inverse-braiding residual %.3e\n", braid);

  bool fail = h.residual > a.tol || q.metric > a.tol || q.torsion > a.tol ||
              q.star > a.tol || braid > a.tol;
  return fail ? kExitCheckFail : kExitOk;
}

struct GeodesicArgs {
  std::string config;
  std::string out_dir;
  double ds = 0.0;
  long steps = -1;
  int record_stride = 0;
  std::string force_mode;
  long seed = 0;
  bool has_ds = false, has_steps = false, has_stride = false;
};

json lattice_summary(const LatticeScenario& sc, const LatticeRunResult& r,
                     long seed) {
  return json{{"scenario", sc.name},
              {"status", status_name(r.status)},
              {"message", r.message},
              {"s_end", r.s_end},
              {"steps_done", r.steps_done},
              {"ds", sc.ds},
              {"steps_requested", sc.steps},
              {"seed", seed},
              {"max_mass_drift", r.max_mass_drift},
              {"max_imag_xplus", r.max_imag_xplus},
              {"max_seam_mass", r.max_seam_mass}};
}

int run_one_scenario(ScenarioConfig& sc, const fs::path& out_dir, long seed,
                     json* summary_out) {
  fs::create_directories(out_dir);
  if (sc.kind == ScenarioConfig::Kind::lattice) {
    LatticeRunResult r = evolve_lattice(sc.lattice);
    std::ofstream csv(out_dir / "trajectory.csv");
    write_trajectory_csv(csv, r.rows, lattice_arrow_labels(sc.lattice.lattice.n),
                         vertex_labels(sc.lattice.lattice.n));
    json summary = lattice_summary(sc.lattice, r, seed);
    write_json(out_dir / "summary.json", summary);
    if (summary_out) *summary_out = std::move(summary);
    return status_exit(r.status);
  }

  const Connection& c = *sc.connection;
  if (!sc.mu.positive)
    std::cerr << "warning: measure has negative entries; the mass column is "
                 "an indefinite form\n";
  EvolveResult r = evolve(c, sc.mu, sc.x0, sc.psi0, sc.opts);
  std::ofstream csv(out_dir / "trajectory.csv");
  write_trajectory_csv(csv, r.rows, arrow_labels(c.graph),
                       vertex_labels(c.graph.n_vertices()));
  double max_defect = 0.0, drift = 0.0;
  double mass0 = r.rows.empty() ? 0.0 : r.rows.front().prob_mass;
  for (const TrajectoryRow& row : r.rows) {
    max_defect = std::max(max_defect, row.reality_defect);
    drift = std::max(drift, std::abs(row.prob_mass - mass0));
  }
  json summary{{"scenario", sc.name},
               {"status", status_name(r.status)},
               {"message", r.message},
               {"s_end", r.s_end},
               {"steps_done", r.steps_done},
               {"ds", sc.opts.ds},
               {"steps_requested", sc.opts.steps},
               {"seed", seed},
               {"measure_positive", sc.mu.positive},
               {"max_mass_drift", drift},
               {"max_reality_defect", max_defect}};
  write_json(out_dir / "summary.json", summary);
  if (summary_out) *summary_out = std::move(summary);
  return status_exit(r.status);
}

void apply_overrides(const GeodesicArgs& a, ScenarioConfig& sc) {
  if (sc.kind == ScenarioConfig::Kind::lattice) {
    if (a.has_ds) sc.lattice.ds = a.ds;
    if (a.has_steps) sc.lattice.steps = a.steps;
    if (a.has_stride) sc.lattice.record_stride = a.record_stride;
    if (!a.force_mode.empty() && a.force_mode != "generated")
      throw std::invalid_argument(
          "lattice stencils carry their driving force; only --force-mode "
          "generated applies");
  } else {
    if (a.has_ds) sc.opts.ds = a.ds;
    if (a.has_steps) sc.opts.steps = a.steps;
    if (a.has_stride) sc.opts.record_stride = a.record_stride;
    if (!a.force_mode.empty())
      sc.opts.force_mode = a.force_mode == "zero" ? ForceMode::zero
                                                  : ForceMode::generated;
  }
}

long scenario_steps(const ScenarioConfig& sc) {
  return sc.kind == ScenarioConfig::Kind::lattice ? sc.lattice.steps
                                                  : sc.opts.steps;
}

int run_geodesic(const GeodesicArgs& a) {
  ScenarioConfig sc = scenario_from_json(load_json(a.config));
  apply_overrides(a, sc);
  if (scenario_steps(sc) <= 0) {
    std::cerr << "steps must be positive\n";
    return kExitUsage;
  }
  int code = run_one_scenario(sc, a.out_dir, a.seed, nullptr);
  std::ifstream back(fs::path(a.out_dir) / "summary.json");
  std::cout << back.rdbuf();
  return code;
}

struct SweepArgs {
  std::string config;
  std::string out_dir;
  long seed = 0;
};

int run_sweep(const SweepArgs& a) {
  json cfg = load_json(a.config);
  json base = cfg.at("base");
  std::string param = cfg.at("param").get<std::string>();
  json values = cfg.at("values");
  if (!values.is_array() || values.empty()) {
    std::cerr << "values must be a nonempty array\n";
    return kExitUsage;
  }

  size_t n_threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QGEO_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n_threads = static_cast<size_t>(v);
  }
  n_threads = std::min(n_threads, values.size());

  fs::create_directories(a.out_dir);
  std::vector<fs::path> dirs(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "run_%03zu", i);
    dirs[i] = fs::path(a.out_dir) / name;
    fs::create_directories(dirs[i]);
  }

  std::vector<int> codes(values.size(), kExitOk);
  std::vector<json> summaries(values.size());
  std::vector<std::string> errors(values.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < values.size();
         i = next.fetch_add(1)) {
      try {
        json j = base;
        j[param] = values[i];
        ScenarioConfig sc = scenario_from_json(j);
        if (scenario_steps(sc) <= 0)
          throw std::invalid_argument("steps must be positive");
        codes[i] = run_one_scenario(sc, dirs[i], a.seed, &summaries[i]);
      } catch (const std::exception& e) {
        codes[i] = kExitUsage;
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  json runs = json::array();
  for (size_t i = 0; i < values.size(); ++i) {
    json entry{{"dir", dirs[i].filename().string()},
               {"value", values[i]},
               {"exit", codes[i]}};
    if (!errors[i].empty()) entry["error"] = errors[i];
    if (!summaries[i].is_null()) entry["summary"] = summaries[i];
    runs.push_back(std::move(entry));
  }
  write_json(fs::path(a.out_dir) / "sweep.json",
             json{{"param", param}, {"values", values}, {"runs", runs}});

  for (int c : codes)
    if (c == kExitUsage) return kExitUsage;
  for (int c : codes)
    if (c == kExitCheckFail) return kExitCheckFail;
  for (int c : codes)
    if (c == kExitBlowup) return kExitBlowup;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum geodesic toolkit for weighted directed graphs"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand(
      "solve-qlc", "solve the compatibility equations for a star or lattice");
  solve->add_option("--star", solve_args.star_n, "number of star legs");
  solve->add_option("--legs", solve_args.legs, "leg weights g_{0->k}")
      ->delimiter(',');
  solve->add_option("--lattice", solve_args.lattice_file,
                    "cyclic lattice metric JSON with fields g and mu");
  solve->add_option("--out", solve_args.out_dir, "output directory");
  solve->add_option("--tol", solve_args.tol, "residual tolerance");

  CheckArgs check_args;
  CLI::App* check =
      app.add_subcommand("check", "verify the residuals of a connection");
  check->add_option("--config", check_args.config, "connection JSON")
      ->required();
  check->add_option("--tol", check_args.tol, "residual tolerance");

  GeodesicArgs geo_args;
  CLI::App* geo =
      app.add_subcommand("geodesic", "integrate a geodesic scenario");
  geo->add_option("--config", geo_args.config, "scenario JSON")->required();
  geo->add_option("--out", geo_args.out_dir, "output directory")->required();
  CLI::Option* ds_opt = geo->add_option("--ds", geo_args.ds, "step size");
  CLI::Option* steps_opt =
      geo->add_option("--steps", geo_args.steps, "number of steps");
  CLI::Option* stride_opt = geo->add_option(
      "--record-stride", geo_args.record_stride, "rows every this many steps");
  geo->add_option("--force-mode", geo_args.force_mode,
                  "driving force: generated or zero")
      ->check(CLI::IsMember({"generated", "zero"}));
  geo->add_option("--seed", geo_args.seed, "seed recorded in the summary");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a scenario across a list of parameter values");
  sweep->add_option("--config", sweep_args.config,
                    "JSON with base scenario, param and values")
      ->required();
  sweep->add_option("--out", sweep_args.out_dir, "output directory")
      ->required();
  sweep->add_option("--seed", sweep_args.seed, "seed recorded in summaries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  geo_args.has_ds = ds_opt->count() > 0;
  geo_args.has_steps = steps_opt->count() > 0;
  geo_args.has_stride = stride_opt->count() > 0;

  try {
    if (solve->parsed()) return run_solve(solve_args);
    if (check->parsed()) return run_check(check_args);
    if (geo->parsed()) return run_geodesic(geo_args);
    if (sweep->parsed()) return run_sweep(sweep_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
