// SPDX-License-Identifier: Apache-2.0
//
// Joint-sparse mixed-norm solver: min ||X||_{2,p} s.t. B ~= D X, by
// iteratively reweighted least squares with an l1 warm start.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "sfmap/dictionary.hpp"
#include "sfmap/tensor.hpp"

namespace sfmap {

struct IrlsConfig {
  double p = 0.7;              // mixed-norm exponent after warmup, in (0, 1]
  int l1_warmup_iters = 10;    // iterations solved with p = 1 first
  int max_iters = 50;
  double epsilon_init = 1e-2;  // relative to ||B||^2 / K
  double epsilon_decay = 0.5;  // applied when the objective stalls
  double convergence_tol = 1e-6;
  int min_p_iters = 5;         // no convergence exit before this many p-iterations
  std::optional<double> lambda_override;  // replaces the caller's lambda when set

  void validate() const;
};

/// Per-bin sparse coefficients: rows = grid directions, cols = time frames.
struct SparseCoeffs {
  Eigen::MatrixXcd data;
  const DirectionGrid* grid = nullptr;
};

struct IrlsTraceRow {
  int iteration;
  double objective;
  double residual_rel;
  int active_set;
};

struct IrlsResult {
  SparseCoeffs coeffs;
  int iterations = 0;
  bool converged = false;
};

/// Solve one frequency bin jointly over frames.
///
/// Iterate X <- W D^H (D W D^H + lambda_abs I)^{-1} B with per-direction
/// weights w_i = (gamma_i^2 + eps)^{(2-p)/2}, gamma_i the l2 norm of row i
/// across frames. `lambda_rel` is dimensionless: the effective loading is
/// lambda_rel * trace(D W D^H) / K, frozen at the start of each p-segment,
/// which makes the solution exactly scale-equivariant (B -> aB gives
/// X -> aX) for any scale-invariant lambda policy. eps starts at
/// epsilon_init * ||B||^2 / K and halves whenever the objective stalls,
/// floored near machine scale; convergence requires a stall with eps at the
/// floor inside the final p-segment.
IrlsResult irls_solve(const Eigen::MatrixXcd& B, const Dictionary& D, const IrlsConfig& cfg,
                      double lambda_rel, std::vector<IrlsTraceRow>* trace = nullptr);

struct DiffusenessResult {
  double psi = 1.0;
  bool silent = false;
};

/// Diffuseness from order-0/1 channels of an ACN-ordered SH tensor:
/// psi = 1 - ||<I>|| / <E> with the pseudo-intensity I = Re{w conj(v)} and
/// energy E = (|w|^2 + ||v||^2)/2, averaged over the given frame and bin
/// ranges (end exclusive; pass -1 to cover everything). A single plane wave
/// gives psi ~ 0, an isotropic field psi ~ 1. Silence returns psi = 1
/// with the flag set.
DiffusenessResult diffuseness(const TFTensor& b_hoa, int frame_begin = 0, int frame_end = -1,
                              int bin_begin = 0, int bin_end = -1);

/// Geometric interpolation lambda_min * (lambda_max/lambda_min)^psi, scaled
/// by b_power. Pass b_power = 1 to obtain the dimensionless loading used by
/// irls_solve.
double lambda_from_diffuseness(double psi, double b_power, double lambda_min = 1e-4,
                               double lambda_max = 1e-1);

}  // namespace sfmap
