// SPDX-License-Identifier: Apache-2.0
#include "sfmap/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sfmap {

namespace {

constexpr int kMaxOrder = 30;

void check_order(int n) {
  if (n < 0 || n > kMaxOrder) throw std::invalid_argument("spherical function order out of range");
}

// j_n(x) = x^n/(2n+1)!! * sum_k (-x^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1))
double bessel_j_series(int n, double x) {
  double prefix = 1.0;
  for (int i = 1; i <= n; ++i) prefix *= x / static_cast<double>(2 * i + 1);
  const double x2h = -0.5 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= x2h / (static_cast<double>(k) * static_cast<double>(2 * n + 2 * k + 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return prefix * sum;
}

double bessel_j0(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double bessel_j1(double x) {
  if (x < 0.1) return bessel_j_series(1, x);  // avoids sin - x cos cancellation
  return (std::sin(x) / x - std::cos(x)) / x;
}

}  // namespace

SphereKind SphereKind::rigid(double r_a) {
  if (!(r_a > 0.0)) throw std::invalid_argument("rigid sphere radius must be positive");
  return {Type::Rigid, r_a};
}

double sph_bessel_j(int n, double x) {
  check_order(n);
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("sph_bessel_j: x must be finite and >= 0");
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n == 0) return bessel_j0(x);
  if (n == 1) return bessel_j1(x);
  if (x < 0.5 * n) return bessel_j_series(n, x);
  if (x >= n + 3.0) {
    // upward recurrence, stable when the order stays below the argument
    double fm1 = bessel_j0(x), f = bessel_j1(x);
    for (int k = 1; k < n; ++k) {
      double fp1 = (2.0 * k + 1.0) / x * f - fm1;
      fm1 = f;
      f = fp1;
    }
    return f;
  }
  // normalized downward recurrence
  const int m = n + 40;
  double fp1 = 0.0, f = 1e-280;
  double fn = 0.0;
  std::vector<double> keep(2, 0.0);  // values at order 1 and 0
  for (int k = m; k >= 1; --k) {
    double fm1 = (2.0 * k + 1.0) / x * f - fp1;
    fp1 = f;
    f = fm1;
    if (k - 1 == n) fn = f;
    // rescale to avoid overflow; ratios are preserved
    if (std::abs(f) > 1e250) {
      f *= 1e-250;
      fp1 *= 1e-250;
      fn *= 1e-250;
    }
  }
  keep[0] = f;    // order 0
  keep[1] = fp1;  // order 1
  const double j0 = bessel_j0(x), j1 = bessel_j1(x);
  const double scale = std::abs(keep[0]) >= std::abs(keep[1]) ? j0 / keep[0] : j1 / keep[1];
  return fn * scale;
}

double sph_bessel_y(int n, double x) {
  check_order(n);
  if (!(x > 0.0)) throw std::domain_error("sph_bessel_y: x must be > 0");
  double ym1 = -std::cos(x) / x;
  if (n == 0) return ym1;
  double y = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int k = 1; k < n; ++k) {
    double yp1 = (2.0 * k + 1.0) / x * y - ym1;
    ym1 = y;
    y = yp1;
  }
  return y;
}

cplx sph_hankel2(int n, double x) {
  if (!(x > 0.0)) throw std::domain_error("sph_hankel2: singular at x <= 0");
  return {sph_bessel_j(n, x), -sph_bessel_y(n, x)};
}

double sph_bessel_j_deriv(int n, double x) {
  check_order(n);
  if (x == 0.0) return n == 1 ? 1.0 / 3.0 : 0.0;
  if (n == 0) return -sph_bessel_j(1, x);
  return sph_bessel_j(n - 1, x) - (n + 1.0) / x * sph_bessel_j(n, x);
}

double sph_bessel_y_deriv(int n, double x) {
  if (!(x > 0.0)) throw std::domain_error("sph_bessel_y_deriv: x must be > 0");
  if (n == 0) return -sph_bessel_y(1, x);
  return sph_bessel_y(n - 1, x) - (n + 1.0) / x * sph_bessel_y(n, x);
}

cplx sph_hankel2_deriv(int n, double x) {
  if (!(x > 0.0)) throw std::domain_error("sph_hankel2_deriv: singular at x <= 0");
  return {sph_bessel_j_deriv(n, x), -sph_bessel_y_deriv(n, x)};
}

cplx sph_harm(int n, int m, double theta, double phi) {
  check_order(n);
  const int am = std::abs(m);
  if (am > n) throw std::invalid_argument("sph_harm: |m| must not exceed n");
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  // normalized associated Legendre with Condon-Shortley phase:
  // start at the diagonal P̄_am^am and recur upward in n.
  double pmm = 1.0 / std::sqrt(kFourPi);
  for (int k = 1; k <= am; ++k)
    pmm *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  double p = pmm;
  if (n > am) {
    double pm1 = pmm;
    p = std::sqrt(2.0 * am + 3.0) * x * pmm;
    for (int k = am + 2; k <= n; ++k) {
      const double a = std::sqrt((4.0 * k * k - 1.0) / (static_cast<double>(k) * k - am * am));
      const double b = std::sqrt(((2.0 * k + 1.0) / (2.0 * k - 3.0)) *
                                 ((static_cast<double>(k - 1) * (k - 1) - am * am) /
                                  (static_cast<double>(k) * k - am * am)));
      const double pn = a * x * p - b * pm1;
      pm1 = p;
      p = pn;
    }
  }
  cplx y = p * cplx(std::cos(am * phi), std::sin(am * phi));
  if (m < 0) {
    y = std::conj(y);
    if (am & 1) y = -y;
  }
  return y;
}

cplx mode_strength(int n, double kr, const SphereKind& kind, double k) {
  check_order(n);
  static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx in = ipow[n & 3];
  if (!kind.is_rigid()) {
    if (!(kr >= 0.0)) throw std::invalid_argument("mode_strength: kr must be >= 0");
    return kFourPi * in * sph_bessel_j(n, kr);
  }
  if (!(kr > 0.0)) throw std::domain_error("mode_strength: rigid sphere requires kr > 0");
  const double ka = k * kind.rigid_radius;
  if (!(ka > 0.0)) throw std::domain_error("mode_strength: rigid sphere requires k * r_a > 0");
  const cplx ratio = sph_bessel_j_deriv(n, ka) / sph_hankel2_deriv(n, ka);
  return kFourPi * in * (sph_bessel_j(n, kr) - ratio * sph_hankel2(n, kr));
}

}  // namespace sfmap
