// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "sfmap/rng.hpp"
#include "sfmap/specfun.hpp"

using namespace sfmap;

namespace {

// Independent high-precision oracle values (arbitrary-precision series /
// closed forms, computed once and frozen).
constexpr double kJ2At1 = 0.06203505201137386;
constexpr double kH21At2Re = 0.43539777497999162;
constexpr double kH21At2Im = 0.35061200427605525;
constexpr double kY21Re = -0.30824046493473821;
constexpr double kY21Im = -0.16839253346445509;
constexpr double kJ1FirstRoot = 4.4934094579090642;
constexpr double kRigidB0Re = 8.6819376378288587;
constexpr double kRigidB0Im = 1.8922986184969660;

// Gauss-Legendre nodes/weights on [-1, 1] via Newton iteration (test-only
// quadrature oracle, independent of the library under test).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (t * p1 - p0) / (t * t - 1.0);
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("spherical bessel j: pinned values") {
  CHECK(sph_bessel_j(0, 0.0) == 1.0);
  CHECK(sph_bessel_j(1, 0.0) == 0.0);
  CHECK(std::abs(sph_bessel_j(0, kPi)) < 1e-15);
  CHECK(rel_err(sph_bessel_j(2, 1.0), kJ2At1) < 1e-10);
}

TEST_CASE("spherical bessel j: series/recurrence regimes agree with the closed forms") {
  // j_2 and j_3 have elementary closed forms; compare across regimes
  for (double x : {0.05, 0.3, 0.9, 2.0, 5.5, 20.0, 120.0}) {
    const double s = std::sin(x), c = std::cos(x);
    const double j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
    const double j3 = (15.0 / (x * x * x) - 6.0 / x) * s / x - (15.0 / (x * x) - 1.0) * c / x;
    CHECK(std::abs(sph_bessel_j(2, x) - j2) < 1e-10 * std::max(1.0, std::abs(j2)));
    CHECK(std::abs(sph_bessel_j(3, x) - j3) < 1e-10 * std::max(1.0, std::abs(j3)));
  }
  // high order, small argument: series regime (frozen oracle value)
  CHECK(sph_bessel_j(25, 1.0) == doctest::Approx(3.32393636639e-34).epsilon(1e-9));
}

TEST_CASE("spherical hankel2: closed-form values") {
  const cplx h0 = sph_hankel2(0, kPi / 2);
  CHECK(std::abs(h0 - cplx(2.0 / kPi, 0.0)) < 1e-14);
  const cplx h0pi = sph_hankel2(0, kPi);
  CHECK(std::abs(h0pi - cplx(0.0, -1.0 / kPi)) < 1e-14);
  const cplx h1 = sph_hankel2(1, 2.0);
  CHECK(rel_err(h1.real(), kH21At2Re) < 1e-10);
  CHECK(rel_err(h1.imag(), kH21At2Im) < 1e-10);
  CHECK_THROWS_AS(sph_hankel2(0, 0.0), std::domain_error);
}

TEST_CASE("derivatives") {
  CHECK(std::abs(sph_bessel_j_deriv(0, kPi / 2) - (-4.0 / (kPi * kPi))) < 1e-14);
  CHECK(sph_bessel_j_deriv(1, 0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(sph_bessel_j_deriv(0, 0.0) == 0.0);
  CHECK(sph_bessel_j_deriv(5, 0.0) == 0.0);
  // finite-difference cross-check of the Hankel derivative
  const double h = 1e-6;
  const cplx fd = (sph_hankel2(1, 1.5 + h) - sph_hankel2(1, 1.5 - h)) / (2.0 * h);
  const cplx an = sph_hankel2_deriv(1, 1.5);
  CHECK(std::abs(fd - an) / std::abs(an) < 1e-5);
  CHECK_THROWS_AS(sph_hankel2_deriv(1, 0.0), std::domain_error);
}

TEST_CASE("wronskian-style cross product j_n y'_n - j'_n y_n = 1/x^2") {
  for (int n = 0; n <= 10; ++n) {
    for (double x : {0.1, 0.7, 3.0, 12.0, 47.0, 100.0}) {
      const double w =
          sph_bessel_j(n, x) * sph_bessel_y_deriv(n, x) - sph_bessel_j_deriv(n, x) * sph_bessel_y(n, x);
      CHECK(std::abs(w - 1.0 / (x * x)) < 1e-8 / (x * x));
    }
  }
}

TEST_CASE("spherical harmonics: pinned values and argument checks") {
  CHECK(std::abs(sph_harm(0, 0, 1.234, -2.0) - cplx(0.28209479177387814, 0.0)) < 1e-14);
  CHECK(std::abs(sph_harm(1, 0, 0.0, 0.0) - cplx(0.48860251190291992, 0.0)) < 1e-14);
  const cplx y21 = sph_harm(2, 1, 1.0, 0.5);
  CHECK(std::abs(y21 - cplx(kY21Re, kY21Im)) < 1e-12);
  CHECK_THROWS_AS(sph_harm(2, 3, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("spherical harmonics: orthonormality under gauss quadrature") {
  std::vector<double> x, w;
  gauss_legendre(24, x, w);
  const int naz = 32;
  const int L = 6;
  for (int n = 0; n <= L; ++n) {
    for (int m = -n; m <= n; ++m) {
      for (int n2 = n; n2 <= L; ++n2) {
        for (int m2 = -n2; m2 <= n2; ++m2) {
          cplx acc(0, 0);
          for (std::size_t i = 0; i < x.size(); ++i) {
            const double theta = std::acos(x[i]);
            for (int a = 0; a < naz; ++a) {
              const double phi = kTwoPi * a / naz;
              acc += w[i] * (kTwoPi / naz) * sph_harm(n, m, theta, phi) *
                     std::conj(sph_harm(n2, m2, theta, phi));
            }
          }
          const double want = (n == n2 && m == m2) ? 1.0 : 0.0;
          CHECK(std::abs(acc - want) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("spherical harmonics: addition theorem") {
  Rng rng(123);
  for (int t = 0; t < 10; ++t) {
    const double theta = std::acos(rng.uniform(-1.0, 1.0));
    const double phi = rng.uniform(-kPi, kPi);
    for (int n = 0; n <= 8; ++n) {
      double s = 0.0;
      for (int m = -n; m <= n; ++m) s += std::norm(sph_harm(n, m, theta, phi));
      CHECK(std::abs(s - (2.0 * n + 1.0) / kFourPi) < 1e-10);
    }
  }
}

TEST_CASE("mode strength: open sphere") {
  CHECK(std::abs(mode_strength(0, 0.0, SphereKind::open()) - cplx(kFourPi, 0.0)) < 1e-12);
  // zero at the first root of j_1, located by bisection on the closed form
  auto j1 = [](double x) { return std::sin(x) / (x * x) - std::cos(x) / x; };
  double lo = 4.0, hi = 5.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (j1(lo) * j1(mid) <= 0 ? hi : lo) = mid;
  }
  CHECK(std::abs(lo - kJ1FirstRoot) < 1e-9);
  CHECK(std::abs(mode_strength(1, lo, SphereKind::open())) < 1e-9);
  // |b_n| <= 4 pi for all kr
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const int n = static_cast<int>(rng.randint(11));
    const double kr = rng.uniform(0.0, 40.0);
    CHECK(std::abs(mode_strength(n, kr, SphereKind::open())) <= kFourPi + 1e-9);
  }
}

TEST_CASE("mode strength: rigid sphere") {
  const cplx b = mode_strength(0, 1.0, SphereKind::rigid(1.0), 1.0);
  CHECK(std::abs(b - cplx(kRigidB0Re, kRigidB0Im)) < 1e-9);
  CHECK_THROWS_AS(mode_strength(0, 0.0, SphereKind::rigid(1.0), 0.0), std::domain_error);
  CHECK_THROWS_AS(SphereKind::rigid(-0.1), std::invalid_argument);
}
