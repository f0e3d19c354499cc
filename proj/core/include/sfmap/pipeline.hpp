// SPDX-License-Identifier: Apache-2.0
//
// The three reconstruction pipelines: SMA-only sparse recovery, one-step
// joint SMA+LMA recovery on the concatenated model, and two-stage residue
// refinement (SMA estimate projected into the LMA domain, the residue
// re-solved with the LMA dictionary, coefficients fused by summation).
#pragma once

#include <map>
#include <string>
#include <vector>

#include "sfmap/dictionary.hpp"
#include "sfmap/irls.hpp"
#include "sfmap/metrics.hpp"
#include "sfmap/sigproc.hpp"

namespace sfmap {

enum class Method { SmaOnly, JointOneStep, ResidueRefine };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct PipelineConfig {
  int sh_order = 4;
  double band_lo_hz = 300.0;
  double band_hi_hz = 2000.0;
  int bin_stride = 3;          // process every stride-th bin inside the band
  IrlsConfig irls;
  double lambda_min = 1.5e-4;  // diffuseness-driven loading range (dimensionless)
  double lambda_max = 0.125;
  double block_weight_hoa = 1.0;  // concatenation weights for the joint method
  double block_weight_lma = 1.0;
  double speed_of_sound = kSpeedOfSound;
  int threads = 0;  // 0 = hardware concurrency
  std::string trace_dir;  // when set, per-bin solver traces are written here as CSV

  /// Indices of the bins the band/stride selects for a given STFT config.
  std::vector<int> processed_bins(const StftConfig& stft) const;
};

/// Stage 1 / SMA-only solve of one bin; lambda from the bin's diffuseness.
IrlsResult sr_sma(const Eigen::MatrixXcd& b_hoa_bin, const Dictionary& d_hoa,
                  const PipelineConfig& cfg, double psi);

/// B_proj = D_LMA(f) * X_hoa.
Eigen::MatrixXcd project_to_lma(const SparseCoeffs& x_hoa, const Dictionary& d_lma);

/// Elementwise difference of same-shape observation blocks.
Eigen::MatrixXcd residue(const Eigen::MatrixXcd& b_lma, const Eigen::MatrixXcd& b_proj);

/// Stage 3: sparse recovery on the residue with the LMA dictionary; the
/// loading follows lambda_min * (lambda_max/lambda_min)^min(1, r) with
/// r = ||B_res|| / ||B_lma|| (diffuseness is not defined in the signal
/// domain, large residues indicate unexplained energy).
IrlsResult sr_residue(const Eigen::MatrixXcd& b_res, const Dictionary& d_lma,
                      const PipelineConfig& cfg, double residue_ratio);

/// Stage 4: coefficient fusion by elementwise sum.
SparseCoeffs fuse(const SparseCoeffs& x_hoa, const SparseCoeffs& x_res);

/// One-step joint solve on stacked observations and dictionary.
IrlsResult sr_joint_onestep(const Eigen::MatrixXcd& b_hoa_bin, const Eigen::MatrixXcd& b_lma_bin,
                            const Dictionary& d_concat, const PipelineConfig& cfg, double psi);

/// e(Omega_n) += sum_t |x_n(t)|^2 for one bin's coefficients.
void accumulate_energy(EnergyMap& map, const SparseCoeffs& x);

/// Map with e(Omega_n) = sum_{t,f} |x_n(t,f)|^2 over the given bins.
EnergyMap energy_map(const std::vector<SparseCoeffs>& per_bin, const DirectionGrid& grid);

struct PipelineResult {
  std::map<Method, EnergyMap> maps;
};

/// Run the requested methods over the processed bins of the given scene
/// observations. The SMA estimate is computed once per bin and shared
/// between SmaOnly and ResidueRefine (their stage-1 problems are
/// identical). Bins run in parallel; accumulation order is deterministic.
PipelineResult run_pipelines(const TFTensor& sma_obs, const TFTensor& lma_obs,
                             const HoaEncoder& encoder, const DirectionGrid& grid,
                             const std::vector<ArrayGeometry>& lma_geometries,
                             const Vec3& phase_origin, const PipelineConfig& cfg,
                             const std::vector<Method>& methods);

}  // namespace sfmap
