// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "sfmap/metrics.hpp"
#include "sfmap/roomsim.hpp"

namespace sfmap {

/// CSV: index,azimuth_deg,elevation_deg,energy,normalized_energy
void write_energy_map_csv(const EnergyMap& map, const std::string& path);

/// Equirectangular grayscale PPM (P6), default 360x181, nearest grid
/// direction shading on the normalized energy.
void write_energy_map_ppm(const EnergyMap& map, const std::string& path, int width = 360,
                          int height = 181);

/// CSV: trial_id,method,n_sources,distance_m,mismatch,median_angular_error_deg,miss_rate
void write_experiment_csv(const std::vector<ExperimentRow>& rows, const std::string& path);

/// Per-cell medians/quartiles:
/// method,n_sources,distance_m,trials,median_mismatch,q1_mismatch,q3_mismatch,
/// median_angular_error_deg,median_miss_rate
void write_experiment_summary_csv(const std::vector<ExperimentRow>& rows, const std::string& path);

/// CSV of solver trace rows: iteration,objective,residual_rel,active_set
void write_irls_trace_csv(const std::vector<IrlsTraceRow>& rows, const std::string& path);

}  // namespace sfmap
