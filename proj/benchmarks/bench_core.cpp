// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "sfmap/dictionary.hpp"
#include "sfmap/fft.hpp"
#include "sfmap/irls.hpp"
#include "sfmap/rng.hpp"
#include "sfmap/roomsim.hpp"
#include "sfmap/sigproc.hpp"

using namespace sfmap;

static void BM_SphHarm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  double theta = 0.7, phi = 1.9;
  for (auto _ : state) {
    for (int m = -n; m <= n; ++m) benchmark::DoNotOptimize(sph_harm(n, m, theta, phi));
  }
}
BENCHMARK(BM_SphHarm)->Arg(2)->Arg(4)->Arg(8);

static void BM_Fft(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  std::vector<cplx> buf(n);
  for (auto& v : buf) v = rng.cgaussian();
  for (auto _ : state) {
    fft_inplace(buf, false);
    fft_inplace(buf, true);
    benchmark::DoNotOptimize(buf.data());
  }
}
BENCHMARK(BM_Fft)->Arg(1024)->Arg(16384);

static void BM_HoaDictionary(benchmark::State& state) {
  DirectionGrid grid = icosphere(3);
  for (auto _ : state) {
    Dictionary d = hoa_dictionary(grid, 4);
    benchmark::DoNotOptimize(d.matrix.data());
  }
}
BENCHMARK(BM_HoaDictionary);

static void BM_IrlsSolve(benchmark::State& state) {
  DirectionGrid grid = icosphere(3);
  Dictionary d = hoa_dictionary(grid, 4);
  Rng rng(3);
  const int T = static_cast<int>(state.range(0));
  Eigen::MatrixXcd s(1, T);
  for (int t = 0; t < T; ++t) s(0, t) = rng.cgaussian();
  Eigen::MatrixXcd b = d.matrix.col(100) * s;
  for (auto _ : state) {
    IrlsResult r = irls_solve(b, d, IrlsConfig{}, 1e-4);
    benchmark::DoNotOptimize(r.coeffs.data.data());
  }
}
BENCHMARK(BM_IrlsSolve)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_ImageSourceRir(benchmark::State& state) {
  RoomSpec room;
  const double alpha = sabine_absorption(room);
  for (auto _ : state) {
    auto h = image_source_rir(room, Vec3(3, 2.5, 1.2), Vec3(6.5, 5, 1.9), alpha, 16000.0);
    benchmark::DoNotOptimize(h.data());
  }
}
BENCHMARK(BM_ImageSourceRir)->Unit(benchmark::kMillisecond);

static void BM_EncodeBin(benchmark::State& state) {
  ArrayGeometry sma = reference_sma_geometry(Vec3::Zero());
  HoaEncoder enc(sma, SphereKind::open());
  StftConfig cfg;
  TFTensor obs(64, 32, cfg.bins(), cfg);
  Rng rng(5);
  for (auto& v : obs.raw()) v = rng.cgaussian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(enc.encode_bin(obs, 64));
  }
}
BENCHMARK(BM_EncodeBin);

BENCHMARK_MAIN();
