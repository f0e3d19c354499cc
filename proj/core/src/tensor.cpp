// SPDX-License-Identifier: Apache-2.0
#include "sfmap/tensor.hpp"

#include <stdexcept>

#include "sfmap/fft.hpp"

namespace sfmap {

void StftConfig::validate() const {
  if (!is_power_of_two(static_cast<std::size_t>(frame_len)))
    throw std::invalid_argument("StftConfig: frame_len must be a power of two");
  if (hop <= 0 || frame_len % hop != 0)
    throw std::invalid_argument("StftConfig: hop must divide frame_len");
  if (sample_rate <= 0) throw std::invalid_argument("StftConfig: sample_rate must be positive");
}

TFTensor::TFTensor(int channels, int frames, int bins, StftConfig cfg)
    : channels_(channels), frames_(frames), bins_(bins), cfg_(cfg) {
  if (channels < 0 || frames < 0 || bins < 0) throw std::invalid_argument("TFTensor: negative dims");
  data_.assign(static_cast<std::size_t>(channels) * frames * bins, cplx(0.0, 0.0));
}

double TFTensor::power() const {
  double p = 0.0;
  for (const auto& z : data_) p += std::norm(z);
  return p;
}

double TFTensor::mean_power() const {
  return data_.empty() ? 0.0 : power() / static_cast<double>(data_.size());
}

void TFTensor::truncate_frames(int nframes) {
  if (nframes >= frames_) return;
  if (nframes < 0) throw std::invalid_argument("truncate_frames: negative count");
  std::vector<cplx> next(static_cast<std::size_t>(channels_) * nframes * bins_);
  for (int c = 0; c < channels_; ++c)
    for (int t = 0; t < nframes; ++t)
      for (int f = 0; f < bins_; ++f)
        next[(static_cast<std::size_t>(c) * nframes + t) * bins_ + f] = at(c, t, f);
  data_ = std::move(next);
  frames_ = nframes;
}

}  // namespace sfmap
