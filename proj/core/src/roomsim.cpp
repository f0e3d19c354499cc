// SPDX-License-Identifier: Apache-2.0
#include "sfmap/roomsim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sfmap/fft.hpp"
#include "sfmap/parallel.hpp"
#include "sfmap/rng.hpp"

namespace sfmap {

namespace {

constexpr double kWallMargin = 0.1;  // sources must stay this far inside the room [m]

struct Image {
  Vec3 pos;
  double amp_factor;  // sqrt(1-alpha)^r, without spherical spreading
};

// Mirror lattice of a source inside a shoebox. Cell index c along an axis
// of length L maps to c*L + s (even c) or (c+1)*L - s (odd c), with
// |cx|+|cy|+|cz| boundary reflections.
std::vector<Image> enumerate_images(const RoomSpec& room, const Vec3& src, double alpha,
                                    double cutoff_db, bool include_direct, const Vec3& ref_point,
                                    double ref_dist) {
  std::vector<Image> out;
  const int C = room.max_image_order;
  const double amp_min = 1.0 / std::max(ref_dist, 1e-3) * std::pow(10.0, -cutoff_db / 20.0);
  const double refl = std::sqrt(std::max(0.0, 1.0 - alpha));
  for (int cx = -C; cx <= C; ++cx) {
    for (int cy = -C; cy <= C; ++cy) {
      for (int cz = -C; cz <= C; ++cz) {
        const int r = std::abs(cx) + std::abs(cy) + std::abs(cz);
        if (r == 0 && !include_direct) continue;
        const double a = std::pow(refl, r);
        if (a <= 0.0) continue;
        Vec3 p;
        const int cells[3] = {cx, cy, cz};
        for (int d = 0; d < 3; ++d) {
          const double L = room.dimensions[d];
          const int c = cells[d];
          p[d] = (c % 2 == 0) ? c * L + src[d] : (c + 1) * L - src[d];
        }
        // conservative prune against the array-center distance
        const double dist0 = (p - ref_point).norm();
        if (a / std::max(dist0, 1e-3) < 0.5 * amp_min) continue;
        out.push_back({p, a});
      }
    }
  }
  return out;
}

void add_sinc_tap(std::vector<double>& h, double t_samples, double amplitude, int halfwidth) {
  const int k0 = static_cast<int>(std::floor(t_samples));
  for (int off = -halfwidth; off <= halfwidth; ++off) {
    const int k = k0 + off;
    if (k < 0 || k >= static_cast<int>(h.size())) continue;
    const double x = k - t_samples;
    const double s = x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
    const double w = 0.5 * (1.0 + std::cos(kPi * x / (halfwidth + 1)));
    h[k] += amplitude * s * w;
  }
}

std::vector<double> bandlimited_burst_signal(Rng& rng, int n, double sample_rate,
                                             const SourceSignalConfig& cfg) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.gaussian();
  // band-limit with a hard FFT mask
  const std::size_t nfft = next_power_of_two(n);
  std::vector<cplx> spec(nfft, 0.0);
  for (int i = 0; i < n; ++i) spec[i] = x[i];
  fft_inplace(spec, false);
  for (std::size_t k = 0; k <= nfft / 2; ++k) {
    const double f = static_cast<double>(k) * sample_rate / static_cast<double>(nfft);
    if (f < cfg.band_lo_hz || f > cfg.band_hi_hz) {
      spec[k] = 0.0;
      if (k > 0 && k < nfft / 2) spec[nfft - k] = 0.0;
    }
  }
  fft_inplace(spec, true);
  for (int i = 0; i < n; ++i) x[i] = spec[i].real();
  // burst envelope: fixed-length segments, each on with probability duty
  const int seg = std::max(1, static_cast<int>(cfg.burst_len_s * sample_rate));
  const int nseg = std::max(1, n / seg);
  const int ramp = std::max(1, static_cast<int>(cfg.fade_s * sample_rate));
  std::vector<bool> on(nseg);
  bool any = false;
  for (int b = 0; b < nseg; ++b) {
    on[b] = rng.uniform() < cfg.burst_duty;
    any = any || on[b];
  }
  if (!any) on[rng.randint(nseg)] = true;
  std::vector<double> env(n, 0.0);
  for (int b = 0; b < nseg; ++b) {
    if (!on[b]) continue;
    const int i0 = b * seg, i1 = std::min((b + 1) * seg, n);
    for (int i = i0; i < i1; ++i) env[i] = 1.0;
    for (int i = 0; i < ramp && i0 + i < i1; ++i)
      env[i0 + i] = std::min(env[i0 + i], static_cast<double>(i) / ramp);
    for (int i = 0; i < ramp && i1 - 1 - i >= i0; ++i)
      env[i1 - 1 - i] = std::min(env[i1 - 1 - i], static_cast<double>(i) / ramp);
  }
  double p = 0.0;
  for (int i = 0; i < n; ++i) {
    x[i] *= env[i];
    p += x[i] * x[i];
  }
  const double rms = std::sqrt(p / n);
  if (rms > 1e-12)
    for (auto& v : x) v /= rms;
  return x;
}

std::vector<Vec3> draw_directions(Rng& rng, const SceneSpec& scene) {
  const double half_height = scene.room.dimensions.z() / 2.0;
  const double el_room = std::asin(
      std::clamp((half_height - kWallMargin) / scene.source_distance, 0.0, 1.0));
  const double el_max = std::min(deg2rad(scene.max_elevation_deg), el_room);
  const double zmax = std::sin(el_max);
  const double min_sep = deg2rad(scene.min_separation_deg);
  const Vec3 ctr = scene.room.center();
  std::vector<Vec3> dirs;
  int guard = 0;
  while (static_cast<int>(dirs.size()) < scene.n_sources) {
    if (++guard > 100000)
      throw std::runtime_error("simulate_scene: cannot place sources with the requested separation");
    const double z = rng.uniform(-zmax, zmax);
    const double az = rng.uniform(-kPi, kPi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 u(s * std::cos(az), s * std::sin(az), z);
    const Vec3 pos = ctr + scene.source_distance * u;
    bool ok = true;
    for (int d = 0; d < 3 && ok; ++d)
      ok = pos[d] >= kWallMargin && pos[d] <= scene.room.dimensions[d] - kWallMargin;
    if (!ok) continue;
    for (const auto& v : dirs)
      if (angular_distance(u, v) < min_sep) {
        ok = false;
        break;
      }
    if (ok) dirs.push_back(u);
  }
  return dirs;
}

}  // namespace

void RoomSpec::validate() const {
  if (!(dimensions.x() > 0 && dimensions.y() > 0 && dimensions.z() > 0))
    throw std::invalid_argument("RoomSpec: dimensions must be positive");
  if (rt60 < 0) throw std::invalid_argument("RoomSpec: rt60 must be >= 0");
  if (max_image_order < 0) throw std::invalid_argument("RoomSpec: max_image_order must be >= 0");
}

void SceneSpec::validate() const {
  room.validate();
  if (n_sources < 1 || n_sources > 20)
    throw std::invalid_argument("SceneSpec: n_sources must be in [1, 20]");
  const Vec3 c = room.center();
  if (source_distance <= 0 ||
      source_distance >= std::min({c.x(), c.y(), room.dimensions.x() - c.x(),
                                   room.dimensions.y() - c.y()}))
    throw std::invalid_argument("SceneSpec: source_distance places sources outside the room");
  if (duration_s <= 0) throw std::invalid_argument("SceneSpec: duration must be positive");
  if (methods.empty()) throw std::invalid_argument("SceneSpec: no methods requested");
}

double sabine_absorption(const RoomSpec& room) {
  room.validate();
  if (room.rt60 == 0.0) return 1.0;
  const Vec3& d = room.dimensions;
  const double volume = d.x() * d.y() * d.z();
  const double surface = 2.0 * (d.x() * d.y() + d.y() * d.z() + d.x() * d.z());
  return std::min(1.0, 0.161 * volume / (surface * room.rt60));
}

std::vector<double> image_source_rir(const RoomSpec& room, const Vec3& src_pos,
                                     const Vec3& mic_pos, double alpha, double sample_rate,
                                     const RirOptions& opts) {
  room.validate();
  for (int d = 0; d < 3; ++d) {
    if (src_pos[d] <= 0 || src_pos[d] >= room.dimensions[d] || mic_pos[d] <= 0 ||
        mic_pos[d] >= room.dimensions[d])
      throw std::invalid_argument("image_source_rir: positions must lie strictly inside the room");
  }
  const double ref_dist = std::max((src_pos - mic_pos).norm(), 1e-3);
  const auto images =
      enumerate_images(room, src_pos, alpha, opts.cutoff_db, opts.include_direct, mic_pos, ref_dist);
  const double amp_min = 1.0 / (kFourPi * ref_dist) * std::pow(10.0, -opts.cutoff_db / 20.0);
  double t_max = 0.0;
  std::vector<std::pair<double, double>> taps;  // (delay samples, amplitude)
  taps.reserve(images.size());
  for (const auto& img : images) {
    const double d = std::max((img.pos - mic_pos).norm(), 1e-3);
    const double a = img.amp_factor / (kFourPi * d);
    const bool is_direct = (img.pos - src_pos).norm() < 1e-9;
    if (a < amp_min && !is_direct) continue;
    const double t = d / room.speed_of_sound * sample_rate;
    taps.emplace_back(t, a);
    t_max = std::max(t_max, t);
  }
  std::vector<double> h(static_cast<std::size_t>(std::ceil(t_max)) + opts.sinc_halfwidth + 2, 0.0);
  for (const auto& [t, a] : taps) add_sinc_tap(h, t, a, opts.sinc_halfwidth);
  return h;
}

SceneData simulate_scene(const SceneSpec& scene, const StftConfig& stft_cfg,
                         const SourceSignalConfig& src_cfg) {
  scene.validate();
  stft_cfg.validate();
  const Vec3 ctr = scene.room.center();
  const double fs = stft_cfg.sample_rate;
  const double alpha = sabine_absorption(scene.room);

  SceneData out;
  out.array_center = ctr;
  out.sma_geometry = reference_sma_geometry(ctr);
  out.lma_geometries = reference_lma_geometries(ctr);

  std::vector<Vec3> all_mics = out.sma_geometry.positions;
  for (const auto& g : out.lma_geometries)
    all_mics.insert(all_mics.end(), g.positions.begin(), g.positions.end());
  const int nmics = static_cast<int>(all_mics.size());

  Rng root(scene.seed);
  Rng dir_rng = root.fork(1);
  out.truths = draw_directions(dir_rng, scene);

  const int nsig = static_cast<int>(scene.duration_s * fs);
  std::vector<std::vector<double>> signals;
  for (int s = 0; s < scene.n_sources; ++s) {
    Rng srng = root.fork(100 + static_cast<std::uint64_t>(s));
    signals.push_back(bandlimited_burst_signal(srng, nsig, fs, src_cfg));
  }

  const int tail = static_cast<int>(0.45 * fs);
  const int outlen = nsig + tail;
  const std::size_t nfft = next_power_of_two(static_cast<std::size_t>(outlen) + 8192);

  // cache source spectra
  std::vector<std::vector<cplx>> src_spectra(scene.n_sources);
  for (int s = 0; s < scene.n_sources; ++s) {
    std::vector<cplx> sp(nfft, 0.0);
    for (int i = 0; i < nsig; ++i) sp[i] = signals[s][i];
    fft_inplace(sp, false);
    src_spectra[s] = std::move(sp);
  }

  // per-source image sets (direct handled separately as a far-field tap)
  std::vector<std::vector<Image>> images(scene.n_sources);
  std::vector<Vec3> src_positions(scene.n_sources);
  for (int s = 0; s < scene.n_sources; ++s) {
    src_positions[s] = ctr + scene.source_distance * out.truths[s];
    images[s] = enumerate_images(scene.room, src_positions[s], alpha, 60.0,
                                 /*include_direct=*/false, ctr, scene.source_distance);
  }

  MultiSignal mics(nmics, std::vector<double>(outlen, 0.0));
  const int W = 16;
  parallel_for(nmics, 0, [&](int q) {
    const Vec3& micpos = all_mics[q];
    std::vector<cplx> acc(nfft, 0.0);
    for (int s = 0; s < scene.n_sources; ++s) {
      const double amp_min = 1.0 / (kFourPi * scene.source_distance) * 1e-3;
      double t_max = 0.0;
      std::vector<std::pair<double, double>> taps;
      for (const auto& img : images[s]) {
        const double d = std::max((img.pos - micpos).norm(), 1e-3);
        const double a = img.amp_factor / (kFourPi * d);
        if (a < amp_min) continue;
        taps.emplace_back(d / scene.room.speed_of_sound * fs, a);
        t_max = std::max(t_max, taps.back().first);
      }
      // far-field direct path: plane wave from the source direction
      const double t_direct =
          (scene.source_distance - (micpos - ctr).dot(out.truths[s])) / scene.room.speed_of_sound * fs;
      taps.emplace_back(t_direct, 1.0 / (kFourPi * scene.source_distance));
      t_max = std::max(t_max, t_direct);
      std::vector<double> h(static_cast<std::size_t>(std::ceil(t_max)) + W + 2, 0.0);
      for (const auto& [t, a] : taps) add_sinc_tap(h, t, a, W);
      std::vector<cplx> hf(nfft, 0.0);
      for (std::size_t i = 0; i < h.size(); ++i) hf[i] = h[i];
      fft_inplace(hf, false);
      for (std::size_t i = 0; i < nfft; ++i) acc[i] += hf[i] * src_spectra[s][i];
    }
    fft_inplace(acc, true);
    for (int i = 0; i < outlen; ++i) mics[q][i] = acc[i].real();
  });

  MultiSignal sma_sig(mics.begin(), mics.begin() + 64);
  MultiSignal lma_sig(mics.begin() + 64, mics.end());
  TFTensor sma = stft(sma_sig, stft_cfg);
  TFTensor lma = stft(lma_sig, stft_cfg);

  // keep only frames overlapping the active source interval
  const int keep = static_cast<int>(scene.duration_s * fs) / stft_cfg.hop + 1;
  sma.truncate_frames(std::min(keep, sma.frames()));
  lma.truncate_frames(std::min(keep, lma.frames()));

  out.sma = add_noise(sma, scene.snr_db, root.fork(1001).next_u64());
  out.lma = add_noise(lma, scene.snr_db, root.fork(1002).next_u64());
  return out;
}

EnergyMap ground_truth_map(const std::vector<Vec3>& truths, const DirectionGrid& grid) {
  EnergyMap map{Eigen::VectorXd::Zero(grid.size()), &grid};
  for (const auto& u : truths) map.energy(nearest_grid_index(grid, u)) += 1.0;
  return map;
}

TrialResult run_trial(const TrialConfig& cfg, const DirectionGrid& grid,
                      const MismatchEvaluator& mismatch_eval) {
  SceneData scene = simulate_scene(cfg.scene, cfg.stft, cfg.source);
  HoaEncoder encoder(scene.sma_geometry, SphereKind::open(), cfg.encoder);
  PipelineResult maps = run_pipelines(scene.sma, scene.lma, encoder, grid, scene.lma_geometries,
                                      scene.array_center, cfg.pipeline, cfg.scene.methods);
  const EnergyMap gt = ground_truth_map(scene.truths, grid);

  TrialResult out;
  out.truths = scene.truths;
  out.seed = cfg.scene.seed;
  for (auto& [method, map] : maps.maps) {
    MethodEval ev;
    ev.map = std::move(map);
    ev.mismatch = mismatch_eval(ev.map, gt);
    ev.angular = angular_errors(ev.map, scene.truths, cfg.peaks);
    std::vector<double> errs;
    int misses = 0;
    for (const auto& rec : ev.angular) {
      if (rec.estimate_index)
        errs.push_back(rad2deg(rec.error_rad));
      else
        ++misses;
    }
    ev.median_angular_deg = summarize(errs).median;
    ev.miss_rate = static_cast<double>(misses) / static_cast<double>(ev.angular.size());
    out.methods.emplace(method, std::move(ev));
  }
  return out;
}

std::uint64_t trial_seed(std::uint64_t base, int n_sources, double distance, int trial) {
  Rng r(base);
  return r.fork(static_cast<std::uint64_t>(n_sources) * 1000003ULL +
                static_cast<std::uint64_t>(std::llround(distance * 100.0)) * 101ULL +
                static_cast<std::uint64_t>(trial))
      .next_u64();
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec,
                                          const std::function<void(const std::string&)>& log) {
  DirectionGrid grid = icosphere(spec.base.grid_subdivisions);
  MismatchEvaluator eval(grid);
  std::vector<ExperimentRow> rows;
  for (int ns : spec.source_counts) {
    for (double dist : spec.distances) {
      for (int t = 0; t < spec.trials; ++t) {
        TrialConfig cfg = spec.base;
        cfg.scene.n_sources = ns;
        cfg.scene.source_distance = dist;
        cfg.scene.seed = trial_seed(spec.base.scene.seed, ns, dist, t);
        TrialResult res = run_trial(cfg, grid, eval);
        for (const auto& [method, ev] : res.methods) {
          rows.push_back({ns, dist, t, cfg.scene.seed, method, ev.mismatch,
                          ev.median_angular_deg, ev.miss_rate});
        }
        if (log)
          log("cell n=" + std::to_string(ns) + " d=" + std::to_string(dist) + " trial " +
              std::to_string(t) + " done");
      }
    }
  }
  return rows;
}

}  // namespace sfmap
