// SPDX-License-Identifier: Apache-2.0
//
// Shoebox image-source simulation and trial orchestration. Scenes place an
// open spherical array at the room center with four line arrays around it,
// draw random source directions, and synthesize reverberant microphone
// signals. The direct path is propagated as a plane wave from the source
// direction (gain 1/(4 pi d), bulk delay d/c); reflections come from the
// specular image-source model. This keeps the direct field consistent with
// the plane-wave dictionaries while the distance controls level and
// reverberation, and matches the free-field synthesis oracle exactly in
// anechoic scenes.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sfmap/metrics.hpp"
#include "sfmap/pipeline.hpp"

namespace sfmap {

struct RoomSpec {
  Vec3 dimensions{10.0, 8.0, 3.0};  // meters
  double rt60 = 0.3;                // seconds
  int max_image_order = 20;         // per-axis image cells
  double speed_of_sound = kSpeedOfSound;

  Vec3 center() const { return dimensions / 2.0; }
  void validate() const;
};

struct SceneSpec {
  RoomSpec room;
  int n_sources = 4;
  double source_distance = 2.5;  // from the SMA center [m]
  double snr_db = 30.0;
  std::uint64_t seed = 1;
  double duration_s = 1.0;
  std::vector<Method> methods{Method::SmaOnly, Method::JointOneStep, Method::ResidueRefine};
  double min_separation_deg = 15.0;
  double max_elevation_deg = 60.0;  // further limited so sources stay in the room

  void validate() const;
};

struct SourceSignalConfig {
  double band_lo_hz = 300.0;
  double band_hi_hz = 2000.0;
  double burst_len_s = 0.1;
  double burst_duty = 0.5;
  double fade_s = 0.01;
};

/// Uniform Sabine absorption alpha = min(1, 0.161 V / (S rt60));
/// rt60 = 0 is the anechoic sentinel (alpha = 1).
double sabine_absorption(const RoomSpec& room);

struct RirOptions {
  double cutoff_db = 60.0;     // drop images below this amplitude vs the direct path
  bool include_direct = true;  // point-source direct tap
  int sinc_halfwidth = 16;
};

/// Shoebox image-source impulse response sampled at sample_rate, with
/// windowed-sinc fractional delays. Amplitude per image:
/// (1-alpha)^(r/2) / (4 pi d) at delay d/c, r = total reflection count.
std::vector<double> image_source_rir(const RoomSpec& room, const Vec3& src_pos,
                                     const Vec3& mic_pos, double alpha, double sample_rate,
                                     const RirOptions& opts = {});

struct SceneData {
  TFTensor sma;  // 64 channels
  TFTensor lma;  // 32 channels, stacked in array declaration order
  std::vector<Vec3> truths;
  ArrayGeometry sma_geometry;
  std::vector<ArrayGeometry> lma_geometries;
  Vec3 array_center;
};

/// Synthesize one scene: seeded source directions (minimum pairwise
/// separation, elevation limited by the room), band-limited noise-burst
/// source signals, per-microphone reverberant propagation, additive noise
/// at snr_db per tensor, STFT, frames truncated to the active interval.
/// Deterministic for a given spec.
SceneData simulate_scene(const SceneSpec& scene, const StftConfig& stft,
                         const SourceSignalConfig& src_cfg);

/// Unit mass at the nearest grid index of each truth direction.
EnergyMap ground_truth_map(const std::vector<Vec3>& truths, const DirectionGrid& grid);

struct TrialConfig {
  SceneSpec scene;
  StftConfig stft;
  EncoderConfig encoder;
  PipelineConfig pipeline;
  SourceSignalConfig source;
  PeakSelectConfig peaks;
  int grid_subdivisions = 3;
};

struct MethodEval {
  EnergyMap map;
  double mismatch = 0.0;
  std::vector<AngularErrorRecord> angular;
  double median_angular_deg = 0.0;  // over resolved truths
  double miss_rate = 0.0;
};

struct TrialResult {
  std::map<Method, MethodEval> methods;
  std::vector<Vec3> truths;
  std::uint64_t seed = 0;
};

/// Simulate one scene, run every requested method on the same tensors and
/// evaluate both metrics against the ground-truth map. The evaluator and
/// grid may be shared across trials.
TrialResult run_trial(const TrialConfig& cfg, const DirectionGrid& grid,
                      const MismatchEvaluator& mismatch_eval);

struct ExperimentSpec {
  TrialConfig base;
  std::vector<int> source_counts{4, 6, 8};
  std::vector<double> distances{2.5};
  int trials = 10;
};

struct ExperimentRow {
  int n_sources = 0;
  double distance = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  Method method = Method::SmaOnly;
  double mismatch = 0.0;
  double median_angular_deg = 0.0;
  double miss_rate = 0.0;
};

/// Deterministic trial seed for a cell: folded from the base seed and the
/// cell coordinates.
std::uint64_t trial_seed(std::uint64_t base, int n_sources, double distance, int trial);

/// Full grid of cells x trials; rows ordered (source_count, distance,
/// trial, method).
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec,
                                          const std::function<void(const std::string&)>& log = {});

}  // namespace sfmap
