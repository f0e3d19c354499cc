// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "sfmap/dictionary.hpp"
#include "sfmap/sigproc.hpp"

using namespace sfmap;

namespace {

TFTensor flat_source(const StftConfig& cfg, int frames, cplx value, int bin_lo, int bin_hi) {
  TFTensor src(1, frames, cfg.bins(), cfg);
  for (int t = 0; t < frames; ++t)
    for (int f = bin_lo; f <= bin_hi; ++f) src.at(0, t, f) = value;
  return src;
}

}  // namespace

TEST_CASE("synth_plane_wave basics") {
  StftConfig cfg;
  TFTensor src = flat_source(cfg, 3, cplx(1.0, -2.0), 0, 256);

  ArrayGeometry g;
  g.kind = ArrayKind::Linear;
  g.positions = {Vec3::Zero(), Vec3(0.1, 0, 0), Vec3(-0.1, 0, 0)};
  g.label = "test";

  TFTensor out = synth_plane_wave(g, Vec3(1, 0, 0), src, Vec3::Zero());
  // mic at the origin reproduces the source exactly
  for (int t = 0; t < 3; ++t)
    for (int f = 0; f <= 256; ++f) CHECK(std::abs(out.at(0, t, f) - src.at(0, t, f)) < 1e-14);
  // f = 0 rows equal the source on all channels
  for (int q = 0; q < 3; ++q) CHECK(std::abs(out.at(q, 0, 0) - src.at(0, 0, 0)) < 1e-14);
  // symmetric mics give a conjugate phase pair relative to the source
  for (int f : {10, 100}) {
    const cplx a = out.at(1, 0, f) / src.at(0, 0, f);
    const cplx b = out.at(2, 0, f) / src.at(0, 0, f);
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
    CHECK(std::abs(std::abs(a) - 1.0) < 1e-12);
  }
  // pinned phase: r = 0.1 x, u = x, f = 1000 Hz -> -2 pi 1000 0.1 / 343
  const int bin = static_cast<int>(1000.0 / (cfg.sample_rate / cfg.frame_len));
  const double f_hz = bin * cfg.sample_rate / cfg.frame_len;
  const double want = -kTwoPi * f_hz * 0.1 / 343.0;
  const cplx ratio = out.at(1, 0, bin) / src.at(0, 0, bin);
  CHECK(std::arg(ratio) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("add_noise: sentinel, determinism, calibration") {
  StftConfig cfg;
  TFTensor src = flat_source(cfg, 40, cplx(1.0, 0.5), 10, 400);

  TFTensor clean = add_noise(src, std::numeric_limits<double>::infinity(), 9);
  for (std::size_t i = 0; i < src.raw().size(); ++i) CHECK(clean.raw()[i] == src.raw()[i]);

  TFTensor n1 = add_noise(src, 30.0, 1234);
  TFTensor n2 = add_noise(src, 30.0, 1234);
  for (std::size_t i = 0; i < n1.raw().size(); ++i) CHECK(n1.raw()[i] == n2.raw()[i]);

  TFTensor n3 = add_noise(src, 30.0, 999);
  double noise_power = 0.0;
  for (std::size_t i = 0; i < n3.raw().size(); ++i) noise_power += std::norm(n3.raw()[i] - src.raw()[i]);
  const double snr_db = 10.0 * std::log10(src.power() / noise_power);
  CHECK(std::abs(snr_db - 30.0) < 0.5);
}

TEST_CASE("hoa_encode: round trip against the dictionary column") {
  DirectionGrid grid = icosphere(3);
  ArrayGeometry sma = reference_sma_geometry(Vec3::Zero());
  HoaEncoder enc(sma, SphereKind::open());
  Dictionary dict = hoa_dictionary(grid, 4);
  StftConfig cfg;
  const cplx amp(0.8, 0.3);
  for (int idx : {11, 222, 500}) {
    for (int bin : {40, 52, 64}) {  // 625-1000 Hz, inside the accurate zone
      TFTensor src = flat_source(cfg, 2, amp, bin, bin);
      TFTensor obs = synth_plane_wave(sma, grid.directions[idx], src, Vec3::Zero());
      Eigen::MatrixXcd got = enc.encode_bin(obs, bin);
      Eigen::VectorXcd want = dict.matrix.col(idx) * amp;
      CHECK((got.col(0) - want).norm() / want.norm() < 1e-3);
      CHECK((got.col(1) - want).norm() / want.norm() < 1e-3);
    }
  }
}

TEST_CASE("hoa_encode: zero input and linearity") {
  ArrayGeometry sma = reference_sma_geometry(Vec3::Zero());
  HoaEncoder enc(sma, SphereKind::open());
  StftConfig cfg;
  TFTensor zero(64, 2, cfg.bins(), cfg);
  TFTensor out = enc.encode(zero);
  for (const auto& z : out.raw()) CHECK(z == cplx(0.0, 0.0));

  DirectionGrid grid = icosphere(1);
  TFTensor src = flat_source(cfg, 2, cplx(1.0, 0.0), 64, 64);
  TFTensor a = synth_plane_wave(sma, grid.directions[5], src, Vec3::Zero());
  TFTensor b = synth_plane_wave(sma, grid.directions[20], src, Vec3::Zero());
  TFTensor mix = a;
  for (std::size_t i = 0; i < mix.raw().size(); ++i)
    mix.raw()[i] = 2.0 * a.raw()[i] + cplx(0, 1) * b.raw()[i];
  Eigen::MatrixXcd ea = enc.encode_bin(a, 64);
  Eigen::MatrixXcd eb = enc.encode_bin(b, 64);
  Eigen::MatrixXcd em = enc.encode_bin(mix, 64);
  CHECK((em - (2.0 * ea + cplx(0, 1) * eb)).norm() <= 1e-12 * em.norm());
}

TEST_CASE("hoa_encode: azimuthal rotation consistency") {
  // encoding a wave from a rotated direction equals the per-m phase rotation
  // of the original encoding; channel (n, m) acquires e^{-i m daz}
  ArrayGeometry sma = reference_sma_geometry(Vec3::Zero());
  HoaEncoder enc(sma, SphereKind::open());
  StftConfig cfg;
  const int bin = 52;
  TFTensor src = flat_source(cfg, 1, cplx(1.0, 0.0), bin, bin);
  const double az0 = 0.4, el = 0.3, daz = 0.9;
  const Vec3 u0(std::cos(el) * std::cos(az0), std::cos(el) * std::sin(az0), std::sin(el));
  const Vec3 u1(std::cos(el) * std::cos(az0 + daz), std::cos(el) * std::sin(az0 + daz), std::sin(el));

  SUBCASE("plane-wave input: consistent to the encoder's aliasing floor") {
    Eigen::MatrixXcd e0 = enc.encode_bin(synth_plane_wave(sma, u0, src, Vec3::Zero()), bin);
    Eigen::MatrixXcd e1 = enc.encode_bin(synth_plane_wave(sma, u1, src, Vec3::Zero()), bin);
    double err = 0, ref = 0;
    for (int n = 0; n <= 4; ++n)
      for (int m = -n; m <= n; ++m) {
        const cplx rot = std::polar(1.0, -m * daz);
        err += std::norm(e1(acn_index(n, m), 0) - rot * e0(acn_index(n, m), 0));
        ref += std::norm(e1(acn_index(n, m), 0));
      }
    CHECK(std::sqrt(err / ref) < 1e-3);
  }

  SUBCASE("order-limited input: exact rotation equivariance") {
    // sample a synthetic field with SH content only up to order 4 at the
    // microphones; the least-squares fit is then alias-free
    auto field_tensor = [&](const Vec3& u) {
      const double theta = std::acos(u.z());
      const double phi = std::atan2(u.y(), u.x());
      TFTensor obs(64, 1, cfg.bins(), cfg);
      for (int q = 0; q < 64; ++q) {
        const Vec3 r = (sma.positions[q] - sma.center).normalized();
        const double th_q = std::acos(std::clamp(r.z(), -1.0, 1.0));
        const double ph_q = std::atan2(r.y(), r.x());
        cplx v(0, 0);
        for (int n = 0; n <= 4; ++n)
          for (int m = -n; m <= n; ++m)
            v += std::conj(sph_harm(n, m, theta, phi)) * sph_harm(n, m, th_q, ph_q);
        obs.at(q, 0, bin) = v;
      }
      return obs;
    };
    Eigen::MatrixXcd e0 = enc.encode_bin(field_tensor(u0), bin);
    Eigen::MatrixXcd e1 = enc.encode_bin(field_tensor(u1), bin);
    double err = 0, ref = 0;
    for (int n = 0; n <= 4; ++n)
      for (int m = -n; m <= n; ++m) {
        const cplx rot = std::polar(1.0, -m * daz);
        err += std::norm(e1(acn_index(n, m), 0) - rot * e0(acn_index(n, m), 0));
        ref += std::norm(e1(acn_index(n, m), 0));
      }
    CHECK(std::sqrt(err / ref) < 1e-10);
  }
}

TEST_CASE("hoa_encode: equalization stays bounded at mode-strength zeros") {
  ArrayGeometry sma = reference_sma_geometry(Vec3::Zero());
  EncoderConfig ecfg;
  HoaEncoder enc(sma, SphereKind::open(), ecfg);
  StftConfig cfg;
  DirectionGrid grid = icosphere(1);
  // scan 100 Hz .. 8 kHz including the open-sphere blind frequencies
  const double cap = 1.0 / (2.0 * kFourPi * ecfg.eq_beta);  // max equalizer gain
  for (int bin = 6; bin < 512; bin += 7) {
    TFTensor src = flat_source(cfg, 1, cplx(1.0, 0.0), bin, bin);
    TFTensor obs = synth_plane_wave(sma, grid.directions[7], src, Vec3::Zero());
    Eigen::MatrixXcd e = enc.encode_bin(obs, bin);
    double in = 0;
    for (int q = 0; q < 64; ++q) in += std::norm(obs.at(q, 0, bin));
    CHECK(e.col(0).norm() <= cap * std::sqrt(in) + 1e-9);
  }
}

TEST_CASE("wav reader round trip (PCM16 and float32)") {
  namespace fs = std::filesystem;
  const std::string path = fs::temp_directory_path() / "sfmap_wav_test.wav";
  // write a tiny PCM16 stereo file by hand
  {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f);
    auto w32 = [&](std::uint32_t v) { std::fwrite(&v, 4, 1, f); };
    auto w16 = [&](std::uint16_t v) { std::fwrite(&v, 2, 1, f); };
    const int n = 4;
    std::fwrite("RIFF", 1, 4, f);
    w32(36 + n * 2 * 2);
    std::fwrite("WAVE", 1, 4, f);
    std::fwrite("fmt ", 1, 4, f);
    w32(16);
    w16(1);
    w16(2);
    w32(16000);
    w32(16000 * 4);
    w16(4);
    w16(16);
    std::fwrite("data", 1, 4, f);
    w32(n * 2 * 2);
    const std::int16_t samples[8] = {0, 16384, -16384, 32767, -32768, 8000, -8000, 123};
    std::fwrite(samples, 2, 8, f);
    std::fclose(f);
  }
  WavData wav = read_wav(path);
  CHECK(wav.sample_rate == 16000.0);
  REQUIRE(wav.channels.size() == 2);
  REQUIRE(wav.channels[0].size() == 4);
  CHECK(wav.channels[0][0] == 0.0);
  CHECK(wav.channels[1][0] == doctest::Approx(0.5));
  CHECK(wav.channels[0][1] == doctest::Approx(-0.5));
  CHECK(wav.channels[1][1] == doctest::Approx(32767.0 / 32768.0));
  fs::remove(path);
  CHECK_THROWS(read_wav("/nonexistent/file.wav"));
}
