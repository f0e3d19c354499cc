// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sfmap/geometry.hpp"

namespace sfmap {

enum class DictionaryDomain { SphericalHarmonic, Signal, Concatenated };

/// Plane-wave dictionary: rows = observation channels, columns = grid
/// directions. Immutable after construction.
struct Dictionary {
  DictionaryDomain domain = DictionaryDomain::Signal;
  Eigen::MatrixXcd matrix;
  const DirectionGrid* grid = nullptr;
  int order = 0;          // SH domain only
  double frequency = 0.0; // signal domain only [Hz]

  int channels() const { return static_cast<int>(matrix.rows()); }
  int directions() const { return static_cast<int>(matrix.cols()); }
};

/// Frequency-independent SH-domain dictionary up to `order`. Column i holds
/// the ACN-ordered plane-wave expansion coefficients of a wave arriving from
/// grid direction i under the e^{-j k <r,u>} steering convention:
/// entry (n,m) = (-1)^n conj(Y_n^m(Omega_i)). hoa_encode applied to such a
/// wave reproduces the column exactly (round-trip pinned by tests).
Dictionary hoa_dictionary(const DirectionGrid& grid, int order);

/// Signal-domain steering dictionary at frequency f for one or more stacked
/// array geometries; entry (q, n) = exp(-j (2 pi f / c) <r_q - origin, u_n>).
/// Rows concatenate the arrays' channels in declaration order.
Dictionary lma_steering_dictionary(const std::vector<ArrayGeometry>& geometries,
                                   const DirectionGrid& grid, double freq_hz,
                                   const Vec3& phase_origin,
                                   double speed_of_sound = kSpeedOfSound);

/// Row-stacked [w_hoa * D_HOA; w_lma * D_LMA]. Both inputs must reference
/// the same grid. Default weights preserve the blocks unchanged.
Dictionary concat_dictionary(const Dictionary& d_hoa, const Dictionary& d_lma,
                             double w_hoa = 1.0, double w_lma = 1.0);

/// Debug dump: one row per channel, columns re/im interleaved per direction.
void export_dictionary_csv(const Dictionary& d, const std::string& path);

}  // namespace sfmap
