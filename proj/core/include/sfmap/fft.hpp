// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "sfmap/common.hpp"

namespace sfmap {

/// In-place radix-2 FFT. n must be a power of two.
void fft_inplace(std::span<cplx> data, bool inverse);

std::vector<cplx> fft(std::span<const cplx> in, bool inverse = false);

/// Full linear convolution of two real sequences (FFT-based).
std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace sfmap
