// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sfmap/geometry.hpp"

namespace sfmap {

/// Per-direction nonnegative accumulated energy over a DirectionGrid.
struct EnergyMap {
  Eigen::VectorXd energy;
  const DirectionGrid* grid = nullptr;
};

/// Triangular spatial kernel: max(1 - angle/(pi/12), 0).
double spatial_kernel(const Vec3& a, const Vec3& b);

/// Kernel-smoothed map deviation in [0, 1]:
/// E = (K11 + K22 - 2 K12) / (K11 + K22),
/// K_ij = sum_qp sqrt(rho_q rho_p) k(Omega_q, Omega_p).
/// Maps are normalized to unit total mass first, so only the energy
/// distribution's shape matters. Returns NaN when either map is all-zero.
/// The evaluator caches the dense kernel matrix of its grid.
class MismatchEvaluator {
 public:
  explicit MismatchEvaluator(const DirectionGrid& grid);
  double operator()(const EnergyMap& m1, const EnergyMap& m2) const;

 private:
  const DirectionGrid* grid_;
  Eigen::MatrixXd kernel_;
};

/// One-shot convenience wrapper around MismatchEvaluator.
double energy_map_mismatch(const EnergyMap& m1, const EnergyMap& m2);

struct PeakSelectConfig {
  double neighborhood_deg = 20.0;
  double energy_floor_db = -20.0;   // relative to the global map maximum
  double local_peak_ratio = 0.8;    // energy fraction of the neighborhood peak
};

struct AngularErrorRecord {
  Vec3 truth;
  std::optional<int> estimate_index;  // empty = miss
  double error_rad = 0.0;             // valid when estimate present
};

/// For each truth: candidates are grid directions within the neighborhood,
/// above the global energy floor and within local_peak_ratio of the
/// neighborhood peak; the estimate is the candidate with maximum energy
/// (ties: smaller angle to the truth, then lower index). An empty candidate
/// set is a miss.
std::vector<AngularErrorRecord> angular_errors(const EnergyMap& map,
                                               const std::vector<Vec3>& truths,
                                               const PeakSelectConfig& cfg = {});

/// Exact order statistics with the lower-median convention:
/// median = sorted[(n-1)/2], quartiles at floor((n-1)/4) and floor(3(n-1)/4).
struct SummaryStats {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  int count = 0;
};
SummaryStats summarize(std::vector<double> values);

}  // namespace sfmap
