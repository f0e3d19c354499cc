// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "sfmap/common.hpp"

namespace sfmap {

/// STFT analysis parameters. frame_len must be a power of two and hop must
/// divide frame_len (Hann window, exact overlap-add reconstruction at 50%).
struct StftConfig {
  int frame_len = 1024;
  int hop = 512;
  double sample_rate = 16000.0;

  void validate() const;
  int bins() const { return frame_len / 2 + 1; }
};

/// Complex time-frequency tensor indexed (channel, frame, bin).
///
/// Sign convention: the analysis kernel is e^{+j 2 pi f t} (a pure delay
/// tau multiplies a bin by e^{+j 2 pi f tau}), so a wave arriving from unit
/// direction u carries the inter-channel steering factor e^{-j k <r, u>}.
class TFTensor {
 public:
  TFTensor() = default;
  TFTensor(int channels, int frames, int bins, StftConfig cfg);

  int channels() const { return channels_; }
  int frames() const { return frames_; }
  int bins() const { return bins_; }
  const StftConfig& config() const { return cfg_; }

  cplx& at(int c, int t, int f) { return data_[(static_cast<std::size_t>(c) * frames_ + t) * bins_ + f]; }
  const cplx& at(int c, int t, int f) const {
    return data_[(static_cast<std::size_t>(c) * frames_ + t) * bins_ + f];
  }

  double bin_freq(int f) const { return f * cfg_.sample_rate / cfg_.frame_len; }

  /// Total squared magnitude.
  double power() const;
  /// Mean squared magnitude per entry.
  double mean_power() const;

  std::vector<cplx>& raw() { return data_; }
  const std::vector<cplx>& raw() const { return data_; }

  /// Keep only the first `nframes` frames.
  void truncate_frames(int nframes);

 private:
  int channels_ = 0, frames_ = 0, bins_ = 0;
  StftConfig cfg_;
  std::vector<cplx> data_;
};

}  // namespace sfmap
