// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sfmap/geometry.hpp"
#include "sfmap/rng.hpp"
#include "sfmap/specfun.hpp"
#include "sfmap/tensor.hpp"

namespace sfmap {

using MultiSignal = std::vector<std::vector<double>>;  // [channel][sample]

/// Hann-windowed one-sided STFT of a multichannel signal. Frames start at
/// sample 0 and advance by cfg.hop; the tail is zero-padded. See TFTensor
/// for the sign convention.
TFTensor stft(const MultiSignal& signal, const StftConfig& cfg);

/// Weighted overlap-add inverse. Exact on the interior where the Hann
/// window overlap fully covers the signal.
MultiSignal istft(const TFTensor& tensor);

/// Plane wave arriving from unit direction u: channel q at (t,f) equals
/// source(t,f) * exp(-j (2 pi f / c) <r_q - origin, u>).
TFTensor synth_plane_wave(const ArrayGeometry& geometry, const Vec3& u,
                          const TFTensor& source, const Vec3& phase_origin,
                          double speed_of_sound = kSpeedOfSound);

/// Additive complex white Gaussian noise scaled so that
/// power(tensor) / power(noise) = 10^(snr_db/10). snr_db = +inf leaves the
/// tensor unchanged. Deterministic for a given seed.
TFTensor add_noise(const TFTensor& tensor, double snr_db, std::uint64_t seed);

struct EncoderConfig {
  int order = 4;          // output SH truncation L
  int fit_order = 6;      // least-squares projection order (>= order)
  double eq_beta = 2e-5;  // Tikhonov floor, relative to 1/(4 pi)
  double speed_of_sound = kSpeedOfSound;
};

/// Spherical-array pressure -> plane-wave-domain SH coefficients.
///
/// Per bin: least-squares projection of the microphone pressures onto the
/// SH basis up to fit_order (pseudo-inverse of the sampling matrix),
/// truncation to `order`, then regularized radial equalization
/// conj(b_n) / (|b_n|^2 + beta^2) with beta = 4 pi * eq_beta. Output
/// channels are ACN-ordered; a plane wave from direction u maps onto the
/// HOA dictionary column for u.
class HoaEncoder {
 public:
  HoaEncoder(const ArrayGeometry& sma, SphereKind kind, EncoderConfig cfg = {});

  /// Encode all bins. Input must have the geometry's channel count.
  TFTensor encode(const TFTensor& observation) const;

  /// Encode a single bin as an (order+1)^2 x frames matrix.
  Eigen::MatrixXcd encode_bin(const TFTensor& observation, int bin) const;

  int order() const { return cfg_.order; }
  const EncoderConfig& config() const { return cfg_; }
  double sampling_condition() const { return condition_; }

 private:
  Eigen::VectorXcd equalizer_gains(double freq_hz) const;

  EncoderConfig cfg_;
  SphereKind kind_;
  double radius_;
  int channels_;
  std::string label_;
  double condition_ = 0.0;
  Eigen::MatrixXcd pinv_;  // (order+1)^2 x channels (truncated rows of the fit)
};

/// 16/32-bit PCM and 32-bit float WAV reader.
struct WavData {
  double sample_rate = 0.0;
  MultiSignal channels;
};
WavData read_wav(const std::string& path);

/// Debug CSV of per-bin magnitudes: rows (channel, frame), columns bins.
void export_tf_magnitude_csv(const TFTensor& tensor, const std::string& path);

}  // namespace sfmap
