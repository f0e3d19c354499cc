// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "sfmap/fft.hpp"
#include "sfmap/rng.hpp"
#include "sfmap/sigproc.hpp"

using namespace sfmap;

TEST_CASE("fft matches a direct DFT") {
  Rng rng(11);
  const int n = 64;
  std::vector<cplx> x(n);
  for (auto& v : x) v = rng.cgaussian();
  auto X = fft(x);
  for (int k = 0; k < n; ++k) {
    cplx want(0, 0);
    for (int i = 0; i < n; ++i) {
      const double a = -kTwoPi * k * i / n;
      want += x[i] * cplx(std::cos(a), std::sin(a));
    }
    CHECK(std::abs(X[k] - want) < 1e-10);
  }
  auto back = fft(X, true);
  for (int i = 0; i < n; ++i) CHECK(std::abs(back[i] - x[i]) < 1e-12);
  CHECK_THROWS_AS(fft_inplace(std::span<cplx>(x.data(), 63), false), std::invalid_argument);
}

TEST_CASE("fft convolution equals the naive convolution") {
  Rng rng(2);
  std::vector<double> a(37), b(12);
  for (auto& v : a) v = rng.gaussian();
  for (auto& v : b) v = rng.gaussian();
  auto c = fft_convolve(a, b);
  REQUIRE(c.size() == a.size() + b.size() - 1);
  for (std::size_t k = 0; k < c.size(); ++k) {
    double want = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (k >= i && k - i < b.size()) want += a[i] * b[k - i];
    CHECK(c[k] == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("stft of a DC signal concentrates at bin zero with gain sum(window)") {
  StftConfig cfg;
  MultiSignal sig(1, std::vector<double>(4096, 1.0));
  TFTensor tf = stft(sig, cfg);
  CHECK(tf.bins() == 513);
  for (int t = 0; t < tf.frames() - 2; ++t) {  // interior frames, no tail padding
    CHECK(std::abs(tf.at(0, t, 0)) == doctest::Approx(512.0).epsilon(1e-12));
    for (int f = 2; f < 40; ++f) CHECK(std::abs(tf.at(0, t, f)) < 1e-9);
  }
}

TEST_CASE("stft of a bin-aligned tone concentrates its frame energy") {
  StftConfig cfg;
  const int bin = 32;
  const double freq = bin * cfg.sample_rate / cfg.frame_len;
  MultiSignal sig(1, std::vector<double>(8192));
  for (std::size_t i = 0; i < sig[0].size(); ++i)
    sig[0][i] = std::sin(kTwoPi * freq * i / cfg.sample_rate);
  TFTensor tf = stft(sig, cfg);
  // the Hann main lobe spans bin +/- 1 with weights 1/2, 1/4, 1/4
  for (int t = 1; t < tf.frames() - 2; ++t) {
    double tot = 0, lobe = 0;
    for (int f = 0; f < tf.bins(); ++f) {
      tot += std::norm(tf.at(0, t, f));
      if (std::abs(f - bin) <= 1) lobe += std::norm(tf.at(0, t, f));
    }
    CHECK(lobe / tot > 0.999);
    CHECK(std::norm(tf.at(0, t, bin)) / tot == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
  }
}

TEST_CASE("stft of zeros is zero; length errors are reported") {
  StftConfig cfg;
  MultiSignal sig(2, std::vector<double>(2048, 0.0));
  TFTensor tf = stft(sig, cfg);
  for (const auto& z : tf.raw()) CHECK(z == cplx(0.0, 0.0));
  MultiSignal tiny(1, std::vector<double>(100, 1.0));
  CHECK_THROWS_AS(stft(tiny, cfg), std::invalid_argument);
}

TEST_CASE("istft round trip is exact on the interior") {
  StftConfig cfg;
  Rng rng(77);
  MultiSignal sig(2, std::vector<double>(6144));
  for (auto& ch : sig)
    for (auto& v : ch) v = rng.gaussian();
  TFTensor tf = stft(sig, cfg);
  MultiSignal back = istft(tf);
  for (std::size_t c = 0; c < sig.size(); ++c) {
    double num = 0, den = 0;
    for (std::size_t i = cfg.frame_len; i + cfg.frame_len < sig[c].size(); ++i) {
      num += (back[c][i] - sig[c][i]) * (back[c][i] - sig[c][i]);
      den += sig[c][i] * sig[c][i];
    }
    CHECK(std::sqrt(num / den) < 1e-10);
  }
}

TEST_CASE("istft of zeros and of an interior impulse") {
  StftConfig cfg;
  MultiSignal zero(1, std::vector<double>(4096, 0.0));
  MultiSignal back = istft(stft(zero, cfg));
  for (double v : back[0]) CHECK(v == 0.0);

  MultiSignal imp(1, std::vector<double>(4096, 0.0));
  imp[0][2000] = 1.0;
  MultiSignal rec = istft(stft(imp, cfg));
  for (int i = 1024; i < 3072; ++i)
    CHECK(rec[0][i] == doctest::Approx(imp[0][i]).epsilon(1e-10));
}

TEST_CASE("stft sign convention: a delayed impulse has phase e^{+j w tau}") {
  StftConfig cfg;
  MultiSignal sig(1, std::vector<double>(2048, 0.0));
  const int delay = 100;
  sig[0][delay] = 1.0;
  TFTensor tf = stft(sig, cfg);
  for (int f : {10, 50, 200}) {
    const double want_phase = kTwoPi * tf.bin_freq(f) * delay / cfg.sample_rate;
    const cplx got = tf.at(0, 0, f);
    const cplx want = std::polar(std::abs(got), want_phase);
    CHECK(std::abs(got - want) < 1e-9 * std::max(1.0, std::abs(got)) + 1e-12);
  }
}
