// SPDX-License-Identifier: Apache-2.0
#include "sfmap/sigproc.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "sfmap/fft.hpp"

namespace sfmap {

namespace {

std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(kTwoPi * i / n));
  return w;
}

int frame_count(std::size_t samples, const StftConfig& cfg) {
  if (samples < static_cast<std::size_t>(cfg.frame_len))
    throw std::invalid_argument("stft: signal shorter than one frame");
  return 1 + static_cast<int>((samples - cfg.frame_len + cfg.hop - 1) / cfg.hop);
}

}  // namespace

TFTensor stft(const MultiSignal& signal, const StftConfig& cfg) {
  cfg.validate();
  if (signal.empty()) throw std::invalid_argument("stft: no channels");
  const std::size_t len = signal[0].size();
  for (const auto& ch : signal)
    if (ch.size() != len) throw std::invalid_argument("stft: ragged channels");
  const int nframes = frame_count(len, cfg);
  const int nbins = cfg.bins();
  TFTensor out(static_cast<int>(signal.size()), nframes, nbins, cfg);
  const auto window = hann_window(cfg.frame_len);
  std::vector<cplx> buf(cfg.frame_len);
  for (int c = 0; c < out.channels(); ++c) {
    const auto& x = signal[c];
    for (int t = 0; t < nframes; ++t) {
      const std::size_t off = static_cast<std::size_t>(t) * cfg.hop;
      for (int i = 0; i < cfg.frame_len; ++i) {
        const std::size_t idx = off + i;
        buf[i] = idx < len ? x[idx] * window[i] : 0.0;
      }
      fft_inplace(buf, false);
      // conjugate = e^{+j w t} analysis kernel (see TFTensor)
      for (int f = 0; f < nbins; ++f) out.at(c, t, f) = std::conj(buf[f]);
    }
  }
  return out;
}

MultiSignal istft(const TFTensor& tensor) {
  const StftConfig& cfg = tensor.config();
  cfg.validate();
  const int n = cfg.frame_len;
  const auto window = hann_window(n);
  const std::size_t outlen = static_cast<std::size_t>(tensor.frames() - 1) * cfg.hop + n;
  MultiSignal out(tensor.channels());
  std::vector<double> wsum(outlen, 0.0);
  std::vector<cplx> buf(n);
  for (int c = 0; c < tensor.channels(); ++c) {
    out[c].assign(outlen, 0.0);
    for (int t = 0; t < tensor.frames(); ++t) {
      for (int f = 0; f < tensor.bins(); ++f) {
        buf[f] = std::conj(tensor.at(c, t, f));
        if (f > 0 && f < n / 2) buf[n - f] = tensor.at(c, t, f);
      }
      fft_inplace(buf, true);
      const std::size_t off = static_cast<std::size_t>(t) * cfg.hop;
      for (int i = 0; i < n; ++i) {
        out[c][off + i] += buf[i].real() * window[i];
        if (c == 0) wsum[off + i] += window[i] * window[i];
      }
    }
  }
  for (auto& ch : out)
    for (std::size_t i = 0; i < outlen; ++i)
      if (wsum[i] > 1e-12) ch[i] /= wsum[i];
  return out;
}

TFTensor synth_plane_wave(const ArrayGeometry& geometry, const Vec3& u, const TFTensor& source,
                          const Vec3& phase_origin, double speed_of_sound) {
  if (source.channels() != 1) throw std::invalid_argument("synth_plane_wave: source must be 1-channel");
  TFTensor out(geometry.channels(), source.frames(), source.bins(), source.config());
  for (int q = 0; q < geometry.channels(); ++q) {
    const double proj = (geometry.positions[q] - phase_origin).dot(u);
    for (int f = 0; f < source.bins(); ++f) {
      const double phase = -kTwoPi * source.bin_freq(f) / speed_of_sound * proj;
      const cplx steer(std::cos(phase), std::sin(phase));
      for (int t = 0; t < source.frames(); ++t) out.at(q, t, f) = steer * source.at(0, t, f);
    }
  }
  return out;
}

TFTensor add_noise(const TFTensor& tensor, double snr_db, std::uint64_t seed) {
  if (tensor.raw().empty()) throw std::invalid_argument("add_noise: empty tensor");
  if (std::isinf(snr_db) && snr_db > 0) return tensor;
  const double sig_power = tensor.power();
  const double noise_power = sig_power / std::pow(10.0, snr_db / 10.0);
  const double per_entry = noise_power / static_cast<double>(tensor.raw().size());
  const double scale = std::sqrt(per_entry);
  TFTensor out = tensor;
  Rng root(seed);
  for (int c = 0; c < out.channels(); ++c) {
    Rng rng = root.fork(static_cast<std::uint64_t>(c));
    for (int t = 0; t < out.frames(); ++t)
      for (int f = 0; f < out.bins(); ++f) out.at(c, t, f) += scale * rng.cgaussian();
  }
  return out;
}

HoaEncoder::HoaEncoder(const ArrayGeometry& sma, SphereKind kind, EncoderConfig cfg)
    : cfg_(cfg), kind_(kind), radius_(sma.radius), channels_(sma.channels()), label_(sma.label) {
  if (sma.kind != ArrayKind::SphericalOpen)
    throw std::invalid_argument("HoaEncoder: geometry must be a spherical array");
  if (cfg_.fit_order < cfg_.order) cfg_.fit_order = cfg_.order;
  if (cfg_.order > 10) throw std::invalid_argument("HoaEncoder: order must be <= 10");
  const int fit_cols = (cfg_.fit_order + 1) * (cfg_.fit_order + 1);
  if (fit_cols > channels_)
    throw std::invalid_argument("HoaEncoder: fit order needs more microphones than available");
  Eigen::MatrixXcd Y(channels_, fit_cols);
  for (int q = 0; q < channels_; ++q) {
    const Vec3 r = (sma.positions[q] - sma.center).normalized();
    const double theta = std::acos(std::clamp(r.z(), -1.0, 1.0));
    const double phi = std::atan2(r.y(), r.x());
    for (int n = 0; n <= cfg_.fit_order; ++n)
      for (int m = -n; m <= n; ++m) Y(q, acn_index(n, m)) = sph_harm(n, m, theta, phi);
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  condition_ = sv(0) / sv(sv.size() - 1);
  if (!(condition_ < 1e6))
    throw std::runtime_error("HoaEncoder: sampling matrix ill-conditioned for geometry '" + label_ +
                             "' (condition " + std::to_string(condition_) + ")");
  Eigen::MatrixXcd full_pinv =
      svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
  pinv_ = full_pinv.topRows((cfg_.order + 1) * (cfg_.order + 1));
}

Eigen::VectorXcd HoaEncoder::equalizer_gains(double freq_hz) const {
  const int nc = (cfg_.order + 1) * (cfg_.order + 1);
  const double k = kTwoPi * freq_hz / cfg_.speed_of_sound;
  const double kr = k * radius_;
  const double beta = kFourPi * cfg_.eq_beta;
  Eigen::VectorXcd g(nc);
  for (int n = 0; n <= cfg_.order; ++n) {
    cplx b;
    if (kind_.is_rigid() && kr <= 0.0)
      b = cplx(0.0, 0.0);  // out-of-domain bin (DC); gain stays zero
    else
      b = mode_strength(n, kr, kind_, k);
    const cplx gain = std::conj(b) / (std::norm(b) + beta * beta);
    for (int m = -n; m <= n; ++m) g(acn_index(n, m)) = gain;
  }
  return g;
}

Eigen::MatrixXcd HoaEncoder::encode_bin(const TFTensor& observation, int bin) const {
  if (observation.channels() != channels_)
    throw std::invalid_argument("HoaEncoder: channel count mismatch");
  const int nc = (cfg_.order + 1) * (cfg_.order + 1);
  const int T = observation.frames();
  Eigen::MatrixXcd p(channels_, T);
  for (int q = 0; q < channels_; ++q)
    for (int t = 0; t < T; ++t) p(q, t) = observation.at(q, t, bin);
  Eigen::MatrixXcd coeffs = pinv_ * p;
  const Eigen::VectorXcd g = equalizer_gains(observation.bin_freq(bin));
  for (int i = 0; i < nc; ++i) coeffs.row(i) *= g(i);
  return coeffs;
}

TFTensor HoaEncoder::encode(const TFTensor& observation) const {
  const int nc = (cfg_.order + 1) * (cfg_.order + 1);
  TFTensor out(nc, observation.frames(), observation.bins(), observation.config());
  for (int f = 0; f < observation.bins(); ++f) {
    Eigen::MatrixXcd c = encode_bin(observation, f);
    for (int i = 0; i < nc; ++i)
      for (int t = 0; t < observation.frames(); ++t) out.at(i, t, f) = c(i, t);
  }
  return out;
}

WavData read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_wav: cannot open " + path);
  auto read_u32 = [&]() {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (b[1] << 8) | (b[2] << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
  };
  auto read_u16 = [&]() {
    unsigned char b[2];
    in.read(reinterpret_cast<char*>(b), 2);
    return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  };
  char tag[5] = {0};
  in.read(tag, 4);
  if (std::strncmp(tag, "RIFF", 4) != 0) throw std::runtime_error("read_wav: not a RIFF file");
  read_u32();
  in.read(tag, 4);
  if (std::strncmp(tag, "WAVE", 4) != 0) throw std::runtime_error("read_wav: not a WAVE file");

  std::uint16_t format = 0, nch = 0, bits = 0;
  std::uint32_t rate = 0;
  WavData out;
  while (in.read(tag, 4)) {
    std::uint32_t size = read_u32();
    if (std::strncmp(tag, "fmt ", 4) == 0) {
      format = read_u16();
      nch = read_u16();
      rate = read_u32();
      read_u32();
      read_u16();
      bits = read_u16();
      in.seekg(size - 16, std::ios::cur);
    } else if (std::strncmp(tag, "data", 4) == 0) {
      if (nch == 0) throw std::runtime_error("read_wav: data before fmt chunk");
      const std::uint32_t bytes_per = bits / 8;
      const std::uint32_t nsamples = size / (bytes_per * nch);
      out.channels.assign(nch, std::vector<double>(nsamples));
      std::vector<char> raw(size);
      in.read(raw.data(), size);
      for (std::uint32_t s = 0; s < nsamples; ++s) {
        for (int c = 0; c < nch; ++c) {
          const char* p = raw.data() + (static_cast<std::size_t>(s) * nch + c) * bytes_per;
          double v = 0.0;
          if (format == 1 && bits == 16) {
            std::int16_t x;
            std::memcpy(&x, p, 2);
            v = x / 32768.0;
          } else if (format == 1 && bits == 32) {
            std::int32_t x;
            std::memcpy(&x, p, 4);
            v = x / 2147483648.0;
          } else if (format == 3 && bits == 32) {
            float x;
            std::memcpy(&x, p, 4);
            v = x;
          } else {
            throw std::runtime_error("read_wav: unsupported format (PCM16/PCM32/float32 only)");
          }
          out.channels[c][s] = v;
        }
      }
      out.sample_rate = rate;
      return out;
    } else {
      in.seekg(size + (size & 1), std::ios::cur);
    }
  }
  throw std::runtime_error("read_wav: no data chunk found");
}

void export_tf_magnitude_csv(const TFTensor& tensor, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_tf_magnitude_csv: cannot open " + path);
  std::fprintf(f, "channel,frame");
  for (int b = 0; b < tensor.bins(); ++b) std::fprintf(f, ",bin%d", b);
  std::fprintf(f, "\n");
  for (int c = 0; c < tensor.channels(); ++c)
    for (int t = 0; t < tensor.frames(); ++t) {
      std::fprintf(f, "%d,%d", c, t);
      for (int b = 0; b < tensor.bins(); ++b)
        std::fprintf(f, ",%.6g", std::abs(tensor.at(c, t, b)));
      std::fprintf(f, "\n");
    }
  std::fclose(f);
}

}  // namespace sfmap
