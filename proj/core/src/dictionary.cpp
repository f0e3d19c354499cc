// SPDX-License-Identifier: Apache-2.0
#include "sfmap/dictionary.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sfmap/specfun.hpp"

namespace sfmap {

Dictionary hoa_dictionary(const DirectionGrid& grid, int order) {
  if (order < 0 || order > 10) throw std::invalid_argument("hoa_dictionary: order must be in [0, 10]");
  const int nc = (order + 1) * (order + 1);
  Dictionary d;
  d.domain = DictionaryDomain::SphericalHarmonic;
  d.grid = &grid;
  d.order = order;
  d.matrix.resize(nc, grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const Vec3& u = grid.directions[i];
    const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
    const double phi = std::atan2(u.y(), u.x());
    for (int n = 0; n <= order; ++n) {
      const double parity = (n & 1) ? -1.0 : 1.0;
      for (int m = -n; m <= n; ++m)
        d.matrix(acn_index(n, m), i) = parity * std::conj(sph_harm(n, m, theta, phi));
    }
  }
  return d;
}

Dictionary lma_steering_dictionary(const std::vector<ArrayGeometry>& geometries,
                                   const DirectionGrid& grid, double freq_hz,
                                   const Vec3& phase_origin, double speed_of_sound) {
  if (freq_hz < 0) throw std::invalid_argument("lma_steering_dictionary: negative frequency");
  int rows = 0;
  for (const auto& g : geometries) rows += g.channels();
  Dictionary d;
  d.domain = DictionaryDomain::Signal;
  d.grid = &grid;
  d.frequency = freq_hz;
  d.matrix.resize(rows, grid.size());
  const double k = kTwoPi * freq_hz / speed_of_sound;
  int row = 0;
  for (const auto& g : geometries) {
    for (const auto& pos : g.positions) {
      const Vec3 r = pos - phase_origin;
      for (int i = 0; i < grid.size(); ++i) {
        const double phase = -k * r.dot(grid.directions[i]);
        d.matrix(row, i) = cplx(std::cos(phase), std::sin(phase));
      }
      ++row;
    }
  }
  return d;
}

Dictionary concat_dictionary(const Dictionary& d_hoa, const Dictionary& d_lma, double w_hoa,
                             double w_lma) {
  if (d_hoa.grid != d_lma.grid)
    throw std::invalid_argument("concat_dictionary: dictionaries use different grids");
  if (d_hoa.domain != DictionaryDomain::SphericalHarmonic ||
      d_lma.domain != DictionaryDomain::Signal)
    throw std::invalid_argument("concat_dictionary: expected SH-domain and signal-domain inputs");
  Dictionary d;
  d.domain = DictionaryDomain::Concatenated;
  d.grid = d_hoa.grid;
  d.order = d_hoa.order;
  d.frequency = d_lma.frequency;
  d.matrix.resize(d_hoa.channels() + d_lma.channels(), d_hoa.directions());
  d.matrix.topRows(d_hoa.channels()) = w_hoa * d_hoa.matrix;
  d.matrix.bottomRows(d_lma.channels()) = w_lma * d_lma.matrix;
  return d;
}

void export_dictionary_csv(const Dictionary& d, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("export_dictionary_csv: cannot open " + path);
  for (int q = 0; q < d.channels(); ++q) {
    for (int i = 0; i < d.directions(); ++i)
      std::fprintf(f, i ? ",%.12g,%.12g" : "%.12g,%.12g", d.matrix(q, i).real(),
                   d.matrix(q, i).imag());
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace sfmap
