// SPDX-License-Identifier: Apache-2.0
#include "sfmap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sfmap {

double spatial_kernel(const Vec3& a, const Vec3& b) {
  return std::max(1.0 - angular_distance(a, b) / (kPi / 12.0), 0.0);
}

MismatchEvaluator::MismatchEvaluator(const DirectionGrid& grid) : grid_(&grid) {
  const int n = grid.size();
  kernel_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    kernel_(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double k = spatial_kernel(grid.directions[i], grid.directions[j]);
      kernel_(i, j) = k;
      kernel_(j, i) = k;
    }
  }
}

double MismatchEvaluator::operator()(const EnergyMap& m1, const EnergyMap& m2) const {
  if (m1.grid != grid_ || m2.grid != grid_)
    throw std::invalid_argument("MismatchEvaluator: map grids do not match the evaluator grid");
  if (m1.energy.size() != kernel_.rows() || m2.energy.size() != kernel_.rows())
    throw std::invalid_argument("MismatchEvaluator: map size mismatch");
  if ((m1.energy.array() < 0).any() || (m2.energy.array() < 0).any())
    throw std::invalid_argument("MismatchEvaluator: negative map entries");
  const double t1 = m1.energy.sum(), t2 = m2.energy.sum();
  if (!(t1 > 0.0) || !(t2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const Eigen::VectorXd s1 = (m1.energy / t1).cwiseSqrt();
  const Eigen::VectorXd s2 = (m2.energy / t2).cwiseSqrt();
  const Eigen::VectorXd ks2 = kernel_ * s2;
  const double k11 = s1.dot(kernel_ * s1);
  const double k22 = s2.dot(ks2);
  const double k12 = s1.dot(ks2);
  return (k11 + k22 - 2.0 * k12) / (k11 + k22);
}

double energy_map_mismatch(const EnergyMap& m1, const EnergyMap& m2) {
  if (m1.grid != m2.grid) throw std::invalid_argument("energy_map_mismatch: grids differ");
  return MismatchEvaluator(*m1.grid)(m1, m2);
}

std::vector<AngularErrorRecord> angular_errors(const EnergyMap& map,
                                               const std::vector<Vec3>& truths,
                                               const PeakSelectConfig& cfg) {
  if (!map.grid) throw std::invalid_argument("angular_errors: map has no grid");
  const auto& grid = *map.grid;
  const double floor = map.energy.maxCoeff() * std::pow(10.0, cfg.energy_floor_db / 10.0);
  const double nb_rad = deg2rad(cfg.neighborhood_deg);
  std::vector<AngularErrorRecord> out;
  out.reserve(truths.size());
  for (const auto& truth : truths) {
    std::vector<std::pair<int, double>> nb;  // (index, angle)
    double local_peak = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
      const double ang = angular_distance(grid.directions[i], truth);
      if (ang <= nb_rad) {
        nb.emplace_back(i, ang);
        local_peak = std::max(local_peak, map.energy(i));
      }
    }
    AngularErrorRecord rec{truth, std::nullopt, 0.0};
    int best = -1;
    double best_e = -1.0, best_ang = 0.0;
    for (const auto& [i, ang] : nb) {
      const double e = map.energy(i);
      if (e < floor || e < cfg.local_peak_ratio * local_peak) continue;
      if (e > best_e || (e == best_e && (ang < best_ang || (ang == best_ang && i < best)))) {
        best = i;
        best_e = e;
        best_ang = ang;
      }
    }
    if (best >= 0) {
      rec.estimate_index = best;
      rec.error_rad = best_ang;
    }
    out.push_back(rec);
  }
  return out;
}

SummaryStats summarize(std::vector<double> values) {
  SummaryStats s;
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return !std::isfinite(v); }),
               values.end());
  s.count = static_cast<int>(values.size());
  if (values.empty()) {
    s.median = s.q1 = s.q3 = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  std::sort(values.begin(), values.end());
  const int n = s.count;
  s.median = values[(n - 1) / 2];
  s.q1 = values[(n - 1) / 4];
  s.q3 = values[3 * (n - 1) / 4];
  return s;
}

}  // namespace sfmap
