// SPDX-License-Identifier: Apache-2.0
#include "sfmap/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sfmap/io.hpp"
#include "sfmap/parallel.hpp"

namespace sfmap {

std::string method_name(Method m) {
  switch (m) {
    case Method::SmaOnly: return "sma_only";
    case Method::JointOneStep: return "joint_onestep";
    case Method::ResidueRefine: return "residue_refine";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "sma_only" || name == "sma") return Method::SmaOnly;
  if (name == "joint_onestep" || name == "joint") return Method::JointOneStep;
  if (name == "residue_refine" || name == "rr") return Method::ResidueRefine;
  throw std::invalid_argument("unknown method name: " + name);
}

std::vector<int> PipelineConfig::processed_bins(const StftConfig& stft) const {
  std::vector<int> bins;
  const int lo = static_cast<int>(std::ceil(band_lo_hz * stft.frame_len / stft.sample_rate));
  const int hi = static_cast<int>(std::floor(band_hi_hz * stft.frame_len / stft.sample_rate));
  for (int b = std::max(lo, 0); b <= std::min(hi, stft.bins() - 1); b += std::max(bin_stride, 1))
    bins.push_back(b);
  return bins;
}

IrlsResult sr_sma(const Eigen::MatrixXcd& b_hoa_bin, const Dictionary& d_hoa,
                  const PipelineConfig& cfg, double psi) {
  const double lam = lambda_from_diffuseness(psi, 1.0, cfg.lambda_min, cfg.lambda_max);
  return irls_solve(b_hoa_bin, d_hoa, cfg.irls, lam);
}

Eigen::MatrixXcd project_to_lma(const SparseCoeffs& x_hoa, const Dictionary& d_lma) {
  if (x_hoa.grid != d_lma.grid)
    throw std::invalid_argument("project_to_lma: coefficient grid does not match dictionary grid");
  return d_lma.matrix * x_hoa.data;
}

Eigen::MatrixXcd residue(const Eigen::MatrixXcd& b_lma, const Eigen::MatrixXcd& b_proj) {
  if (b_lma.rows() != b_proj.rows() || b_lma.cols() != b_proj.cols())
    throw std::invalid_argument("residue: shape mismatch");
  return b_lma - b_proj;
}

IrlsResult sr_residue(const Eigen::MatrixXcd& b_res, const Dictionary& d_lma,
                      const PipelineConfig& cfg, double residue_ratio) {
  const double r = std::min(1.0, residue_ratio);
  const double lam = lambda_from_diffuseness(r, 1.0, cfg.lambda_min, cfg.lambda_max);
  return irls_solve(b_res, d_lma, cfg.irls, lam);
}

SparseCoeffs fuse(const SparseCoeffs& x_hoa, const SparseCoeffs& x_res) {
  if (x_hoa.grid != x_res.grid || x_hoa.data.rows() != x_res.data.rows() ||
      x_hoa.data.cols() != x_res.data.cols())
    throw std::invalid_argument("fuse: shape mismatch");
  SparseCoeffs out;
  out.grid = x_hoa.grid;
  out.data = x_hoa.data + x_res.data;
  return out;
}

IrlsResult sr_joint_onestep(const Eigen::MatrixXcd& b_hoa_bin, const Eigen::MatrixXcd& b_lma_bin,
                            const Dictionary& d_concat, const PipelineConfig& cfg, double psi) {
  if (b_hoa_bin.cols() != b_lma_bin.cols())
    throw std::invalid_argument("sr_joint_onestep: frame count mismatch");
  Eigen::MatrixXcd b(b_hoa_bin.rows() + b_lma_bin.rows(), b_hoa_bin.cols());
  b.topRows(b_hoa_bin.rows()) = cfg.block_weight_hoa * b_hoa_bin;
  b.bottomRows(b_lma_bin.rows()) = cfg.block_weight_lma * b_lma_bin;
  const double lam = lambda_from_diffuseness(psi, 1.0, cfg.lambda_min, cfg.lambda_max);
  return irls_solve(b, d_concat, cfg.irls, lam);
}

void accumulate_energy(EnergyMap& map, const SparseCoeffs& x) {
  if (map.grid != x.grid) throw std::invalid_argument("accumulate_energy: grid mismatch");
  map.energy += x.data.rowwise().squaredNorm();
}

EnergyMap energy_map(const std::vector<SparseCoeffs>& per_bin, const DirectionGrid& grid) {
  EnergyMap map{Eigen::VectorXd::Zero(grid.size()), &grid};
  for (const auto& x : per_bin) accumulate_energy(map, x);
  return map;
}

PipelineResult run_pipelines(const TFTensor& sma_obs, const TFTensor& lma_obs,
                             const HoaEncoder& encoder, const DirectionGrid& grid,
                             const std::vector<ArrayGeometry>& lma_geometries,
                             const Vec3& phase_origin, const PipelineConfig& cfg,
                             const std::vector<Method>& methods) {
  if (sma_obs.frames() != lma_obs.frames())
    throw std::invalid_argument("run_pipelines: SMA/LMA frame count mismatch");
  const bool want_sma = std::count(methods.begin(), methods.end(), Method::SmaOnly) > 0;
  const bool want_joint = std::count(methods.begin(), methods.end(), Method::JointOneStep) > 0;
  const bool want_rr = std::count(methods.begin(), methods.end(), Method::ResidueRefine) > 0;

  const Dictionary d_hoa = hoa_dictionary(grid, cfg.sh_order);
  const std::vector<int> bins = cfg.processed_bins(sma_obs.config());
  const int nb = static_cast<int>(bins.size());
  const int T = sma_obs.frames();

  const TFTensor b_hoa = encoder.encode(sma_obs);

  struct BinOut {
    Eigen::VectorXd sma, joint, rr;
  };
  std::vector<BinOut> slots(nb);

  parallel_for(nb, cfg.threads, [&](int bi) {
    const int bin = bins[bi];
    Eigen::MatrixXcd Bh(b_hoa.channels(), T), Bl(lma_obs.channels(), T);
    for (int c = 0; c < b_hoa.channels(); ++c)
      for (int t = 0; t < T; ++t) Bh(c, t) = b_hoa.at(c, t, bin);
    for (int c = 0; c < lma_obs.channels(); ++c)
      for (int t = 0; t < T; ++t) Bl(c, t) = lma_obs.at(c, t, bin);

    const double psi = diffuseness(b_hoa, 0, -1, bin, bin + 1).psi;
    const Dictionary d_lma = lma_steering_dictionary(lma_geometries, grid, b_hoa.bin_freq(bin),
                                                     phase_origin, cfg.speed_of_sound);

    std::vector<IrlsTraceRow> trace;
    std::vector<IrlsTraceRow>* tr = cfg.trace_dir.empty() ? nullptr : &trace;
    auto flush_trace = [&](const char* stage) {
      if (!tr || trace.empty()) return;
      char name[64];
      std::snprintf(name, sizeof(name), "/irls_trace_bin%04d_%s.csv", bin, stage);
      write_irls_trace_csv(trace, cfg.trace_dir + name);
      trace.clear();
    };

    IrlsResult x_hoa;
    if (want_sma || want_rr) {
      const double lam = lambda_from_diffuseness(psi, 1.0, cfg.lambda_min, cfg.lambda_max);
      x_hoa = irls_solve(Bh, d_hoa, cfg.irls, lam, tr);
      flush_trace("sma");
      if (want_sma) slots[bi].sma = x_hoa.coeffs.data.rowwise().squaredNorm();
    }
    if (want_rr) {
      const Eigen::MatrixXcd b_proj = project_to_lma(x_hoa.coeffs, d_lma);
      const Eigen::MatrixXcd b_res = residue(Bl, b_proj);
      const double blnorm = Bl.norm();
      const double ratio = blnorm > 0 ? b_res.norm() / blnorm : 1.0;
      const double lam2 = lambda_from_diffuseness(std::min(1.0, ratio), 1.0, cfg.lambda_min,
                                                  cfg.lambda_max);
      IrlsResult x_res = irls_solve(b_res, d_lma, cfg.irls, lam2, tr);
      flush_trace("residue");
      const SparseCoeffs fused = fuse(x_hoa.coeffs, x_res.coeffs);
      slots[bi].rr = fused.data.rowwise().squaredNorm();
    }
    if (want_joint) {
      Dictionary d_cat =
          concat_dictionary(d_hoa, d_lma, cfg.block_weight_hoa, cfg.block_weight_lma);
      Eigen::MatrixXcd Bc(Bh.rows() + Bl.rows(), T);
      Bc.topRows(Bh.rows()) = cfg.block_weight_hoa * Bh;
      Bc.bottomRows(Bl.rows()) = cfg.block_weight_lma * Bl;
      const double lam = lambda_from_diffuseness(psi, 1.0, cfg.lambda_min, cfg.lambda_max);
      IrlsResult x_joint = irls_solve(Bc, d_cat, cfg.irls, lam, tr);
      flush_trace("joint");
      slots[bi].joint = x_joint.coeffs.data.rowwise().squaredNorm();
    }
  });

  PipelineResult out;
  for (Method m : methods) out.maps.emplace(m, EnergyMap{Eigen::VectorXd::Zero(grid.size()), &grid});
  for (int bi = 0; bi < nb; ++bi) {
    if (want_sma) out.maps.at(Method::SmaOnly).energy += slots[bi].sma;
    if (want_joint) out.maps.at(Method::JointOneStep).energy += slots[bi].joint;
    if (want_rr) out.maps.at(Method::ResidueRefine).energy += slots[bi].rr;
  }
  return out;
}

}  // namespace sfmap
