// SPDX-License-Identifier: Apache-2.0
//
// sfmap: spatial acoustic energy maps from hybrid spherical + linear
// microphone arrays by sparse plane-wave decomposition.
//
// Subcommands:
//   trial       one seeded scene, energy map CSV + PPM per method
//   experiment  full grid (source counts x distances x trials), CSV tables
//   selftest    fast installation check of the numeric core
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "sfmap/config.hpp"
#include "sfmap/io.hpp"
#include "sfmap/specfun.hpp"

namespace fs = std::filesystem;
using namespace sfmap;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "sfmap_out";
  bool out_dir_set = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string methods;
  int threads = 0;
  bool threads_set = false;
  bool debug_trace = false;
};

void apply_env(CommonOpts& o) {
  if (!o.out_dir_set) {
    if (const char* v = std::getenv("SFMAP_OUT_DIR")) o.out_dir = v;
  }
  if (!o.threads_set) {
    if (const char* v = std::getenv("SFMAP_THREADS")) o.threads = std::atoi(v);
  }
}

RunConfig load_with_overrides(const CommonOpts& o) {
  RunConfig cfg = load_config(o.config_path);
  if (o.seed_set) cfg.trial.scene.seed = o.seed;
  if (o.threads) cfg.trial.pipeline.threads = o.threads;
  if (!o.methods.empty()) {
    std::vector<Method> ms;
    std::string tok;
    for (char c : o.methods + ",") {
      if (c == ',') {
        if (!tok.empty()) {
          try {
            ms.push_back(method_from_name(tok));
          } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
          }
        }
        tok.clear();
      } else {
        tok += c;
      }
    }
    if (ms.empty()) throw ConfigError("config: --methods selected nothing");
    cfg.trial.scene.methods = ms;
  }
  cfg.experiment.base = cfg.trial;
  return cfg;
}

int cmd_trial(CommonOpts o) {
  apply_env(o);
  RunConfig cfg = load_with_overrides(o);
  fs::create_directories(o.out_dir);
  if (o.debug_trace) {
    fs::create_directories(o.out_dir + "/trace");
    cfg.trial.pipeline.trace_dir = o.out_dir + "/trace";
  }
  DirectionGrid grid = icosphere(cfg.trial.grid_subdivisions);
  MismatchEvaluator eval(grid);
  TrialResult res = run_trial(cfg.trial, grid, eval);
  const EnergyMap gt = ground_truth_map(res.truths, grid);
  write_energy_map_csv(gt, o.out_dir + "/map_ground_truth.csv");
  std::printf("trial seed=%llu sources=%d distance=%.3g rt60=%.3g\n",
              static_cast<unsigned long long>(res.seed), cfg.trial.scene.n_sources,
              cfg.trial.scene.source_distance, cfg.trial.scene.room.rt60);
  for (const auto& [method, ev] : res.methods) {
    const std::string base = o.out_dir + "/map_" + method_name(method);
    write_energy_map_csv(ev.map, base + ".csv");
    write_energy_map_ppm(ev.map, base + ".ppm");
    std::printf("%-16s mismatch=%.4f median_angular_error=%.2f deg miss_rate=%.2f\n",
                method_name(method).c_str(), ev.mismatch, ev.median_angular_deg, ev.miss_rate);
  }
  return 0;
}

int cmd_experiment(CommonOpts o) {
  apply_env(o);
  RunConfig cfg = load_with_overrides(o);
  fs::create_directories(o.out_dir);
  fs::create_directories(o.out_dir + "/maps");
  DirectionGrid grid = icosphere(cfg.experiment.base.grid_subdivisions);
  MismatchEvaluator eval(grid);
  std::vector<ExperimentRow> rows;
  for (int ns : cfg.experiment.source_counts) {
    for (double dist : cfg.experiment.distances) {
      for (int t = 0; t < cfg.experiment.trials; ++t) {
        TrialConfig tc = cfg.experiment.base;
        tc.scene.n_sources = ns;
        tc.scene.source_distance = dist;
        tc.scene.seed = trial_seed(cfg.experiment.base.scene.seed, ns, dist, t);
        TrialResult res = run_trial(tc, grid, eval);
        char cell[128];
        std::snprintf(cell, sizeof(cell), "n%d_d%.3g_t%02d", ns, dist, t);
        for (const auto& [method, ev] : res.methods) {
          rows.push_back({ns, dist, t, tc.scene.seed, method, ev.mismatch,
                          ev.median_angular_deg, ev.miss_rate});
          write_energy_map_csv(ev.map,
                               o.out_dir + "/maps/" + cell + "_" + method_name(method) + ".csv");
        }
        std::printf("cell n=%d d=%.3g trial %d/%d done\n", ns, dist, t + 1,
                    cfg.experiment.trials);
        std::fflush(stdout);
      }
    }
  }
  write_experiment_csv(rows, o.out_dir + "/results.csv");
  write_experiment_summary_csv(rows, o.out_dir + "/summary.csv");
  std::printf("wrote %s/results.csv and %s/summary.csv\n", o.out_dir.c_str(), o.out_dir.c_str());
  return 0;
}

bool check(bool ok, const char* what) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what);
  return ok;
}

int cmd_selftest() {
  bool all = true;
  {
    bool ok = true;
    for (double x : {0.5, 1.7, 6.3, 25.0})
      for (int n : {0, 1, 3, 7}) {
        const double w = sph_bessel_j(n, x) * sph_bessel_y_deriv(n, x) -
                         sph_bessel_j_deriv(n, x) * sph_bessel_y(n, x);
        ok = ok && std::abs(w - 1.0 / (x * x)) < 1e-9 / (x * x) + 1e-14;
      }
    all = check(ok, "spherical Bessel cross-product identity") && all;
  }
  {
    bool ok = true;
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      const double theta = std::acos(rng.uniform(-1.0, 1.0));
      const double phi = rng.uniform(-kPi, kPi);
      for (int n : {1, 4, 8}) {
        double s = 0.0;
        for (int m = -n; m <= n; ++m) s += std::norm(sph_harm(n, m, theta, phi));
        ok = ok && std::abs(s - (2.0 * n + 1) / kFourPi) < 1e-10;
      }
    }
    all = check(ok, "spherical harmonic addition theorem") && all;
  }
  {
    DirectionGrid grid = icosphere(1);
    ArrayGeometry sma = reference_sma_geometry(Vec3::Zero());
    HoaEncoder enc(sma, SphereKind::open());
    Dictionary dict = hoa_dictionary(grid, 4);
    StftConfig stft_cfg;
    TFTensor src(1, 2, stft_cfg.bins(), stft_cfg);
    bool ok = true;
    for (int idx : {3, 17}) {
      for (int bin : {40, 64}) {
        for (int t = 0; t < 2; ++t) src.at(0, t, bin) = cplx(0.7, -0.4);
        TFTensor obs = synth_plane_wave(sma, grid.directions[idx], src, Vec3::Zero());
        Eigen::MatrixXcd enc_bin = enc.encode_bin(obs, bin);
        Eigen::VectorXcd expected = dict.matrix.col(idx) * cplx(0.7, -0.4);
        ok = ok && (enc_bin.col(0) - expected).norm() / expected.norm() < 1e-3;
      }
    }
    all = check(ok, "plane-wave encoding round trip") && all;
  }
  {
    DirectionGrid grid = icosphere(2);
    EnergyMap m{Eigen::VectorXd::Random(grid.size()).cwiseAbs(), &grid};
    MismatchEvaluator eval(grid);
    bool ok = eval(m, m) == 0.0;
    EnergyMap a{Eigen::VectorXd::Zero(grid.size()), &grid};
    EnergyMap b = a;
    a.energy(0) = 1.0;
    b.energy(grid.size() - 1) = 1.0;
    ok = ok && std::abs(eval(a, b) - 1.0) < 1e-12;
    all = check(ok, "energy map mismatch identities") && all;
  }
  {
    DirectionGrid grid = icosphere(1);
    Dictionary dict = hoa_dictionary(grid, 4);
    Eigen::MatrixXcd B = dict.matrix.col(11) * Eigen::RowVector3cd(1.0, cplx(0, 1), -0.5);
    IrlsConfig cfg;
    IrlsResult res = irls_solve(B, dict, cfg, 1e-8);
    Eigen::VectorXd en = res.coeffs.data.rowwise().squaredNorm();
    int argmax = 0;
    en.maxCoeff(&argmax);
    bool ok = argmax == 11 && en(11) / en.sum() > 0.999;
    all = check(ok, "sparse solver support recovery") && all;
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse plane-wave energy mapping for hybrid microphone arrays"};
  app.require_subcommand(1);
  CommonOpts opts;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON run configuration")->required();
    sub->add_option("--out", opts.out_dir, "output directory")
        ->each([&](const std::string&) { opts.out_dir_set = true; });
    sub->add_option("--seed", opts.seed, "override the scene seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
    sub->add_option("--methods", opts.methods,
                    "comma list: sma_only,joint_onestep,residue_refine");
    sub->add_option("--threads", opts.threads, "worker threads (0 = all cores)")
        ->each([&](const std::string&) { opts.threads_set = true; });
    sub->add_flag("--debug-trace", opts.debug_trace, "write per-bin solver traces");
  };

  add_common(app.add_subcommand("trial", "run one seeded trial"));
  add_common(app.add_subcommand("experiment", "run the configured trial grid"));
  app.add_subcommand("selftest", "fast numeric self-check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("trial")) return cmd_trial(opts);
    if (app.got_subcommand("experiment")) return cmd_experiment(opts);
    return cmd_selftest();
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
