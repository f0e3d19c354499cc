// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "sfmap/common.hpp"

namespace sfmap {

// Deterministic generator (splitmix64 core). We avoid <random> distributions
// so that streams are reproducible across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Derive an independent stream, e.g. one per channel or per trial.
  Rng fork(std::uint64_t stream_id) const {
    std::uint64_t s = state_;
    s ^= 0x9e3779b97f4a7c15ULL + stream_id * 0xbf58476d1ce4e5b9ULL;
    Rng r(s);
    r.next_u64();  // decorrelate from the parent state
    return r;
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = kTwoPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circularly symmetric complex normal with unit variance (E|z|^2 = 1).
  cplx cgaussian() {
    return {gaussian() * 0.7071067811865476, gaussian() * 0.7071067811865476};
  }

  std::uint64_t randint(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sfmap
