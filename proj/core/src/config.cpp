// SPDX-License-Identifier: Apache-2.0
#include "sfmap/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace sfmap {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& obj, const std::string& section, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) fail("unknown key '" + key + "' in section '" + section + "'");
  }
}

template <typename T>
void get(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) {
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      fail(std::string("bad value for key '") + key + "'");
    }
  }
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.experiment.base = cfg.trial;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    fail(path + ":" + std::to_string(line) + ": " + e.what());
  }
  if (!root.is_object()) fail("top level must be an object");
  check_keys(root, "(top)", {"room", "sources", "stft", "encoder", "solver", "pipeline",
                             "metrics", "experiment"});
  for (const char* required : {"room", "sources"})
    if (!root.contains(required)) fail(std::string("missing required section '") + required + "'");

  RunConfig cfg;
  TrialConfig& t = cfg.trial;

  {
    const json& room = root.at("room");
    check_keys(room, "room", {"dimensions", "rt60", "max_image_order", "speed_of_sound"});
    std::vector<double> dims{t.scene.room.dimensions.x(), t.scene.room.dimensions.y(),
                             t.scene.room.dimensions.z()};
    get(room, "dimensions", dims);
    if (dims.size() != 3) fail("room.dimensions must have 3 entries");
    t.scene.room.dimensions = Vec3(dims[0], dims[1], dims[2]);
    get(room, "rt60", t.scene.room.rt60);
    get(room, "max_image_order", t.scene.room.max_image_order);
    get(room, "speed_of_sound", t.scene.room.speed_of_sound);
    t.pipeline.speed_of_sound = t.scene.room.speed_of_sound;
    t.encoder.speed_of_sound = t.scene.room.speed_of_sound;
  }
  {
    const json& s = root.at("sources");
    check_keys(s, "sources",
               {"count", "distance_m", "snr_db", "duration_s", "seed", "min_separation_deg",
                "max_elevation_deg", "band_lo_hz", "band_hi_hz", "burst_len_s", "burst_duty",
                "fade_s"});
    get(s, "count", t.scene.n_sources);
    get(s, "distance_m", t.scene.source_distance);
    get(s, "snr_db", t.scene.snr_db);
    get(s, "duration_s", t.scene.duration_s);
    get(s, "seed", t.scene.seed);
    get(s, "min_separation_deg", t.scene.min_separation_deg);
    get(s, "max_elevation_deg", t.scene.max_elevation_deg);
    get(s, "band_lo_hz", t.source.band_lo_hz);
    get(s, "band_hi_hz", t.source.band_hi_hz);
    get(s, "burst_len_s", t.source.burst_len_s);
    get(s, "burst_duty", t.source.burst_duty);
    get(s, "fade_s", t.source.fade_s);
  }
  if (root.contains("stft")) {
    const json& s = root.at("stft");
    check_keys(s, "stft", {"frame_len", "hop", "sample_rate"});
    get(s, "frame_len", t.stft.frame_len);
    get(s, "hop", t.stft.hop);
    get(s, "sample_rate", t.stft.sample_rate);
  }
  if (root.contains("encoder")) {
    const json& s = root.at("encoder");
    check_keys(s, "encoder", {"order", "fit_order", "eq_beta"});
    get(s, "order", t.encoder.order);
    get(s, "fit_order", t.encoder.fit_order);
    get(s, "eq_beta", t.encoder.eq_beta);
    t.pipeline.sh_order = t.encoder.order;
  }
  if (root.contains("solver")) {
    const json& s = root.at("solver");
    check_keys(s, "solver",
               {"p", "l1_warmup_iters", "max_iters", "epsilon_init", "epsilon_decay",
                "convergence_tol", "min_p_iters", "lambda_min", "lambda_max", "lambda_override"});
    get(s, "p", t.pipeline.irls.p);
    get(s, "l1_warmup_iters", t.pipeline.irls.l1_warmup_iters);
    get(s, "max_iters", t.pipeline.irls.max_iters);
    get(s, "epsilon_init", t.pipeline.irls.epsilon_init);
    get(s, "epsilon_decay", t.pipeline.irls.epsilon_decay);
    get(s, "convergence_tol", t.pipeline.irls.convergence_tol);
    get(s, "min_p_iters", t.pipeline.irls.min_p_iters);
    get(s, "lambda_min", t.pipeline.lambda_min);
    get(s, "lambda_max", t.pipeline.lambda_max);
    if (s.contains("lambda_override") && !s.at("lambda_override").is_null()) {
      double v = 0;
      get(s, "lambda_override", v);
      t.pipeline.irls.lambda_override = v;
    }
  }
  if (root.contains("pipeline")) {
    const json& s = root.at("pipeline");
    check_keys(s, "pipeline",
               {"band_lo_hz", "band_hi_hz", "bin_stride", "sh_order", "block_weight_hoa",
                "block_weight_lma", "grid_subdivisions", "methods", "threads"});
    get(s, "band_lo_hz", t.pipeline.band_lo_hz);
    get(s, "band_hi_hz", t.pipeline.band_hi_hz);
    get(s, "bin_stride", t.pipeline.bin_stride);
    get(s, "sh_order", t.pipeline.sh_order);
    get(s, "block_weight_hoa", t.pipeline.block_weight_hoa);
    get(s, "block_weight_lma", t.pipeline.block_weight_lma);
    get(s, "grid_subdivisions", t.grid_subdivisions);
    get(s, "threads", t.pipeline.threads);
    if (s.contains("methods")) {
      std::vector<std::string> names;
      get(s, "methods", names);
      t.scene.methods.clear();
      for (const auto& n : names) {
        try {
          t.scene.methods.push_back(method_from_name(n));
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
      }
      if (t.scene.methods.empty()) fail("pipeline.methods must not be empty");
    }
  }
  if (root.contains("metrics")) {
    const json& s = root.at("metrics");
    check_keys(s, "metrics", {"neighborhood_deg", "energy_floor_db", "local_peak_ratio"});
    get(s, "neighborhood_deg", t.peaks.neighborhood_deg);
    get(s, "energy_floor_db", t.peaks.energy_floor_db);
    get(s, "local_peak_ratio", t.peaks.local_peak_ratio);
  }
  cfg.experiment.base = t;
  if (root.contains("experiment")) {
    const json& s = root.at("experiment");
    check_keys(s, "experiment", {"source_counts", "distances", "trials"});
    get(s, "source_counts", cfg.experiment.source_counts);
    get(s, "distances", cfg.experiment.distances);
    get(s, "trials", cfg.experiment.trials);
    if (cfg.experiment.source_counts.empty() || cfg.experiment.distances.empty() ||
        cfg.experiment.trials < 1)
      fail("experiment grid must be non-empty");
  }

  try {
    t.scene.validate();
    t.stft.validate();
    t.pipeline.irls.validate();
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return cfg;
}

}  // namespace sfmap
