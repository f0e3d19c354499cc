// SPDX-License-Identifier: Apache-2.0
//
// Spherical Bessel/Hankel functions, spherical harmonics and the radial
// mode-strength response of a measurement sphere. All functions are pure
// and thread-safe.
#pragma once

#include "sfmap/common.hpp"

namespace sfmap {

/// Boundary condition of the measurement sphere.
struct SphereKind {
  enum class Type { Open, Rigid };
  Type type = Type::Open;
  double rigid_radius = 0.0;  // r_a [m], only for Rigid

  static SphereKind open() { return {Type::Open, 0.0}; }
  static SphereKind rigid(double r_a);
  bool is_rigid() const { return type == Type::Rigid; }
};

/// Spherical Bessel function of the first kind j_n(x).
///
/// Power series below x < n/2 (and for tiny x), closed forms for n <= 1,
/// upward recurrence for x >= n + 3 and normalized downward recurrence in
/// between; relative accuracy ~1e-12 for n <= 30, x in [0, 200].
double sph_bessel_j(int n, double x);

/// Spherical Bessel function of the second kind y_n(x), x > 0.
/// Upward recurrence (stable: y is the dominant solution).
double sph_bessel_y(int n, double x);

/// Spherical Hankel function of the second kind, h̄_n(x) = j_n(x) - i y_n(x).
cplx sph_hankel2(int n, double x);

/// First derivatives via f'_n = f_{n-1} - ((n+1)/x) f_n.
/// At x = 0: j'_0 = 0, j'_1 = 1/3, j'_n = 0 for n >= 2.
double sph_bessel_j_deriv(int n, double x);
double sph_bessel_y_deriv(int n, double x);
cplx sph_hankel2_deriv(int n, double x);

/// Orthonormal complex spherical harmonic Y_n^m(theta, phi) with
/// Condon-Shortley phase; theta is inclination from +z, phi azimuth.
/// Requires |m| <= n, n <= 30.
cplx sph_harm(int n, int m, double theta, double phi);

/// ACN channel index for order n, degree m: n^2 + n + m.
inline int acn_index(int n, int m) { return n * n + n + m; }

/// Radial mode strength b_n(kr) = 4 pi i^n [ j_n(kr) ]           (open)
///                     4 pi i^n [ j_n(kr) - j'_n(ka)/h'_n(ka) h_n(kr) ] (rigid)
/// where h is the spherical Hankel function of the second kind and
/// ka = k * rigid_radius. Rigid spheres require kr > 0 and k > 0.
cplx mode_strength(int n, double kr, const SphereKind& kind, double k = 0.0);

}  // namespace sfmap
