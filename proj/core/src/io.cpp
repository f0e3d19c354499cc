// SPDX-License-Identifier: Apache-2.0
#include "sfmap/io.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <stdexcept>
#include <tuple>

namespace sfmap {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_or_throw(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw std::runtime_error("cannot open " + path);
  return f;
}

}  // namespace

void write_energy_map_csv(const EnergyMap& map, const std::string& path) {
  if (!map.grid) throw std::invalid_argument("write_energy_map_csv: map has no grid");
  auto f = open_or_throw(path, "w");
  std::fprintf(f.get(), "index,azimuth_deg,elevation_deg,energy,normalized_energy\n");
  const double total = map.energy.sum();
  for (int i = 0; i < map.grid->size(); ++i) {
    const Vec3& u = map.grid->directions[i];
    std::fprintf(f.get(), "%d,%.10g,%.10g,%.12g,%.12g\n", i, azimuth_deg(u), elevation_deg(u),
                 map.energy(i), total > 0 ? map.energy(i) / total : 0.0);
  }
}

void write_energy_map_ppm(const EnergyMap& map, const std::string& path, int width, int height) {
  if (!map.grid) throw std::invalid_argument("write_energy_map_ppm: map has no grid");
  auto f = open_or_throw(path, "wb");
  std::fprintf(f.get(), "P6\n%d %d\n255\n", width, height);
  const double emax = map.energy.maxCoeff();
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * 3);
  for (int py = 0; py < height; ++py) {
    const double el = 90.0 - 180.0 * py / (height - 1);
    for (int px = 0; px < width; ++px) {
      const double az = -180.0 + 360.0 * (px + 0.5) / width;
      const int idx = nearest_grid_index(*map.grid, from_az_el_deg(az, el));
      const double v = emax > 0 ? map.energy(idx) / emax : 0.0;
      const unsigned char g = static_cast<unsigned char>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
      row[3 * px + 0] = row[3 * px + 1] = row[3 * px + 2] = g;
    }
    std::fwrite(row.data(), 1, row.size(), f.get());
  }
}

void write_experiment_csv(const std::vector<ExperimentRow>& rows, const std::string& path) {
  auto f = open_or_throw(path, "w");
  std::fprintf(f.get(),
               "trial_id,method,n_sources,distance_m,mismatch,median_angular_error_deg,miss_rate\n");
  for (const auto& r : rows)
    std::fprintf(f.get(), "%d,%s,%d,%.10g,%.10g,%.10g,%.10g\n", r.trial,
                 method_name(r.method).c_str(), r.n_sources, r.distance, r.mismatch,
                 r.median_angular_deg, r.miss_rate);
}

void write_experiment_summary_csv(const std::vector<ExperimentRow>& rows,
                                  const std::string& path) {
  std::map<std::tuple<std::string, int, double>, std::vector<const ExperimentRow*>> cells;
  for (const auto& r : rows)
    cells[{method_name(r.method), r.n_sources, r.distance}].push_back(&r);
  auto f = open_or_throw(path, "w");
  std::fprintf(f.get(),
               "method,n_sources,distance_m,trials,median_mismatch,q1_mismatch,q3_mismatch,"
               "median_angular_error_deg,median_miss_rate\n");
  for (const auto& [key, cell] : cells) {
    std::vector<double> mis, ang, miss;
    for (const auto* r : cell) {
      mis.push_back(r->mismatch);
      ang.push_back(r->median_angular_deg);
      miss.push_back(r->miss_rate);
    }
    const SummaryStats sm = summarize(mis);
    const SummaryStats sa = summarize(ang);
    const SummaryStats ss = summarize(miss);
    std::fprintf(f.get(), "%s,%d,%.10g,%zu,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                 std::get<0>(key).c_str(), std::get<1>(key), std::get<2>(key), cell.size(),
                 sm.median, sm.q1, sm.q3, sa.median, ss.median);
  }
}

void write_irls_trace_csv(const std::vector<IrlsTraceRow>& rows, const std::string& path) {
  auto f = open_or_throw(path, "w");
  std::fprintf(f.get(), "iteration,objective,residual_rel,active_set\n");
  for (const auto& r : rows)
    std::fprintf(f.get(), "%d,%.12g,%.12g,%d\n", r.iteration, r.objective, r.residual_rel,
                 r.active_set);
}

}  // namespace sfmap
