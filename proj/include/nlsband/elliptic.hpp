#pragma once

// Real-argument Jacobi elliptic functions and Legendre elliptic integrals in
// the modulus convention: every `t` below is the modulus k, not m = k^2, so
// sn(x; t) has real period 4K(t) and dn^2 + t^2 sn^2 = 1.
//
// Complete integrals of the first and second kind come from the AGM,
// Jacobi functions from the descending Landen transformation, and the
// incomplete integrals from Carlson's symmetric forms.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nlsband/errors.hpp"

namespace nlsband {

/// Largest admissible modulus. Larger inputs are rejected, never clamped.
inline constexpr double kMaxModulus = 1.0 - 1e-12;

/// Elliptic modulus t in [0, kMaxModulus].
class Modulus {
 public:
  explicit Modulus(double t) : t_(t) {
    if (!std::isfinite(t) || t < 0.0 || t > kMaxModulus) {
      throw DomainError("modulus must lie in [0, 1): got " + std::to_string(t));
    }
  }

  double value() const { return t_; }
  double squared() const { return t_ * t_; }
  /// t'^2 = 1 - t^2, formed without cancellation near t = 1.
  double complement_squared() const { return (1.0 - t_) * (1.0 + t_); }
  double complement() const { return std::sqrt(complement_squared()); }

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  double t_;
};

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

inline void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw DomainError(std::string(name) + " must be finite");
}

inline void require_amplitude(double phi) {
  require_finite(phi, "amplitude");
  if (phi < 0.0 || phi > kHalfPi) {
    throw DomainError("amplitude must lie in [0, pi/2]: got " + std::to_string(phi));
  }
}

// R_C(1, 1 + e), stable for small |e|.
inline double carlson_rc1p(double e) {
  if (std::abs(e) < 1e-4) {
    return 1.0 + e * (-1.0 / 3.0 + e * (1.0 / 5.0 + e * (-1.0 / 7.0 + e / 9.0)));
  }
  if (e > 0.0) {
    const double s = std::sqrt(e);
    return std::atan(s) / s;
  }
  const double s = std::sqrt(-e);
  return std::atanh(s) / s;
}

// R_C(x, y) for x >= 0, y > 0.
inline double carlson_rc(double x, double y) {
  if (x == y) return 1.0 / std::sqrt(x);
  if (x < y) return std::acos(std::sqrt(x / y)) / std::sqrt(y - x);
  return std::acosh(std::sqrt(x / y)) / std::sqrt(x - y);
}

/// Carlson R_F(x, y, z); arguments non-negative, at most one zero.
inline double carlson_rf(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z < 0.0 || x + y == 0.0 || y + z == 0.0 || x + z == 0.0) {
    throw DomainError("carlson_rf: invalid arguments");
  }
  const double a0 = (x + y + z) / 3.0;
  double a = a0;
  double xn = x, yn = y, zn = z;
  double q = std::pow(3.0 * kEps, -1.0 / 8.0) *
             std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double scale = 1.0;
  for (int it = 0; it < 64 && q * scale >= std::abs(a); ++it) {
    const double rx = std::sqrt(xn), ry = std::sqrt(yn), rz = std::sqrt(zn);
    const double lambda = rx * ry + ry * rz + rz * rx;
    xn = (xn + lambda) / 4.0;
    yn = (yn + lambda) / 4.0;
    zn = (zn + lambda) / 4.0;
    a = (a + lambda) / 4.0;
    scale /= 4.0;
  }
  const double X = scale * (a0 - x) / a;
  const double Y = scale * (a0 - y) / a;
  const double Z = -X - Y;
  const double e2 = X * Y - Z * Z;
  const double e3 = X * Y * Z;
  return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0 -
          5.0 * e2 * e2 * e2 / 208.0 + 3.0 * e3 * e3 / 104.0 + e2 * e2 * e3 / 16.0) /
         std::sqrt(a);
}

/// Carlson R_D(x, y, z) = R_J(x, y, z, z); x, y >= 0 (not both zero), z > 0.
inline double carlson_rd(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z <= 0.0 || x + y == 0.0) {
    throw DomainError("carlson_rd: invalid arguments");
  }
  const double a0 = (x + y + 3.0 * z) / 5.0;
  double a = a0;
  double xn = x, yn = y, zn = z;
  double q = std::pow(kEps / 4.0, -1.0 / 8.0) *
             std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)}) * 1.2;
  double scale = 1.0;
  double sum = 0.0;
  for (int it = 0; it < 64 && q * scale >= std::abs(a); ++it) {
    const double rx = std::sqrt(xn), ry = std::sqrt(yn), rz = std::sqrt(zn);
    const double lambda = rx * ry + ry * rz + rz * rx;
    sum += scale / (rz * (zn + lambda));
    xn = (xn + lambda) / 4.0;
    yn = (yn + lambda) / 4.0;
    zn = (zn + lambda) / 4.0;
    a = (a + lambda) / 4.0;
    scale /= 4.0;
  }
  const double X = scale * (a0 - x) / a;
  const double Y = scale * (a0 - y) / a;
  const double Z = -(X + Y) / 3.0;
  const double e2 = X * Y - 6.0 * Z * Z;
  const double e3 = (3.0 * X * Y - 8.0 * Z * Z) * Z;
  const double e4 = 3.0 * (X * Y - Z * Z) * Z * Z;
  const double e5 = X * Y * Z * Z * Z;
  const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 -
                        3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
  return scale * series / (a * std::sqrt(a)) + 3.0 * sum;
}

/// Carlson R_J(x, y, z, p) for x, y, z >= 0 (at most one zero) and p > 0.
inline double carlson_rj(double x, double y, double z, double p) {
  if (x < 0.0 || y < 0.0 || z < 0.0 || p <= 0.0 || x + y == 0.0 || y + z == 0.0 ||
      x + z == 0.0) {
    throw DomainError("carlson_rj: invalid arguments");
  }
  const double a0 = (x + y + z + 2.0 * p) / 5.0;
  double a = a0;
  double xn = x, yn = y, zn = z, pn = p;
  double delta = (p - x) * (p - y) * (p - z);
  const double q = std::pow(kEps / 5.0, -1.0 / 8.0) *
                   std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z),
                             std::abs(a0 - p)});
  double scale = 1.0;
  double sum = 0.0;
  for (int it = 0; it < 64; ++it) {
    const double rx = std::sqrt(xn), ry = std::sqrt(yn), rz = std::sqrt(zn),
                 rp = std::sqrt(pn);
    const double d = (rp + rx) * (rp + ry) * (rp + rz);
    const double e = delta / (d * d);
    if (e < -0.5 && e > -1.5) {
      // 1 + e formed directly; the subtraction would cancel.
      const double b = 2.0 * rp * (pn + rx * (ry + rz) + ry * rz) / d;
      sum += scale / d * carlson_rc(1.0, b);
    } else {
      sum += scale / d * carlson_rc1p(e);
    }
    const double lambda = rx * ry + ry * rz + rz * rx;
    a = (a + lambda) / 4.0;
    scale /= 4.0;
    if (scale * q < std::abs(a)) break;
    xn = (xn + lambda) / 4.0;
    yn = (yn + lambda) / 4.0;
    zn = (zn + lambda) / 4.0;
    pn = (pn + lambda) / 4.0;
    delta /= 64.0;
  }
  const double X = scale * (a0 - x) / a;
  const double Y = scale * (a0 - y) / a;
  const double Z = scale * (a0 - z) / a;
  const double P = -(X + Y + Z) / 2.0;
  const double e2 = X * Y + X * Z + Y * Z - 3.0 * P * P;
  const double e3 = X * Y * Z + 2.0 * e2 * P + 4.0 * P * P * P;
  const double e4 = (2.0 * X * Y * Z + e2 * P + 3.0 * P * P * P) * P;
  const double e5 = X * Y * Z * P * P;
  const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 -
                        3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
  return scale * series / (a * std::sqrt(a)) + 6.0 * sum;
}

/// One AGM run from (1, t'). Besides K it accumulates
///   F1 = sum_n 2^(n-1) (c_n / t)^2,   t^2 F1 = (K - E) / K,
/// with c_{n+1} = c_n^2 / (4 a_{n+1}), so neither K - E nor F1 suffers
/// cancellation and F1(0) = 1/2 falls out without a 0/0.
struct AgmSums {
  double K;
  double F1;  // (K - E) / (K t^2)
  double E;
};

inline AgmSums agm_sums(const Modulus& m) {
  const double t = m.value();
  double a = 1.0;
  double b = m.complement();
  double d = 1.0;  // c_n / t
  double weight = 0.5;
  double f1 = 0.5;
  for (int it = 0; it < 64 && std::abs(a - b) > kEps * a; ++it) {
    const double a_next = (a + b) / 2.0;
    d = t * d * d / (4.0 * a_next);
    b = std::sqrt(a * b);
    a = a_next;
    weight *= 2.0;
    f1 += weight * d * d;
  }
  const double K = std::numbers::pi / (2.0 * a);
  return {K, f1, K * (1.0 - m.squared() * f1)};
}

// F(phi, k) for 0 <= k <= 1 (k = 1 only with phi < pi/2).
inline double raw_F(double phi, double k) {
  if (phi == 0.0) return 0.0;
  const double s = std::sin(phi), c = std::cos(phi);
  const double kc2 = (1.0 - k) * (1.0 + k);
  const double delta2 = c * c + kc2 * s * s;
  return s * carlson_rf(c * c, delta2, 1.0);
}

// F(phi, k) - E(phi, k) = (k^2/3) sin^3(phi) R_D(cos^2, Delta^2, 1).
inline double raw_F_minus_E(double phi, double k) {
  if (phi == 0.0 || k == 0.0) return 0.0;
  const double s = std::sin(phi), c = std::cos(phi);
  const double kc2 = (1.0 - k) * (1.0 + k);
  const double delta2 = c * c + kc2 * s * s;
  return k * k / 3.0 * s * s * s * carlson_rd(c * c, delta2, 1.0);
}

}  // namespace detail

/// Complete elliptic integral of the first kind, K(t) = pi / (2 AGM(1, t')).
inline double complete_K(const Modulus& t) { return detail::agm_sums(t).K; }

/// Complete elliptic integral of the second kind.
inline double complete_E(const Modulus& t) { return detail::agm_sums(t).E; }

/// F(phi, t) = int_0^phi d(theta) / sqrt(1 - t^2 sin^2 theta), 0 <= phi <= pi/2.
inline double incomplete_F(double phi, const Modulus& t) {
  detail::require_amplitude(phi);
  if (phi == detail::kHalfPi) return complete_K(t);
  return detail::raw_F(phi, t.value());
}

/// E(phi, t) = int_0^phi sqrt(1 - t^2 sin^2 theta) d(theta), 0 <= phi <= pi/2.
inline double incomplete_E(double phi, const Modulus& t) {
  detail::require_amplitude(phi);
  if (phi == detail::kHalfPi) return complete_E(t);
  return detail::raw_F(phi, t.value()) - detail::raw_F_minus_E(phi, t.value());
}

/// (sn, cn, dn)(x; t) by the descending Landen transformation.
inline JacobiTriple jacobi(double x, const Modulus& t) {
  detail::require_finite(x, "argument");
  const double k = t.value();
  if (k == 0.0) return {std::sin(x), std::cos(x), 1.0};

  std::array<double, 32> a{};
  std::array<double, 32> c{};
  a[0] = 1.0;
  c[0] = k;
  double b = t.complement();
  int n = 0;
  while (n + 1 < static_cast<int>(a.size()) && std::abs(c[n]) > detail::kEps * a[n]) {
    a[n + 1] = (a[n] + b) / 2.0;
    c[n + 1] = c[n] * c[n] / (4.0 * a[n + 1]);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * x, n);
  for (int j = n; j > 0; --j) {
    phi = (phi + std::asin(c[j] / a[j] * std::sin(phi))) / 2.0;
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn^2 = t'^2 + t^2 cn^2 keeps full relative accuracy as dn -> t'.
  const double dn = std::sqrt(t.complement_squared() + t.squared() * cn * cn);
  return {sn, cn, dn};
}

/// Heuman's Lambda,
///   Lambda0(phi, t) = (2/pi) [E(t) F(phi, t') + K(t) E(phi, t') - K(t) F(phi, t')].
inline double heuman_lambda(double phi, const Modulus& t) {
  detail::require_amplitude(phi);
  if (phi == 0.0) return 0.0;
  if (t.value() == 0.0) return std::sin(phi);  // K = E = pi/2, F - E cancels
  if (phi == detail::kHalfPi) return 1.0;      // Legendre's relation
  const auto sums = detail::agm_sums(t);
  const double kc = t.complement();
  const double f = detail::raw_F(phi, kc);
  const double f_minus_e = detail::raw_F_minus_E(phi, kc);
  return 2.0 / std::numbers::pi * (sums.E * f - sums.K * f_minus_e);
}

namespace detail {

/// Below this distance from nu = 1 the complete third-kind integral switches
/// to the Heuman-Lambda form (when also nu > t^2).
inline constexpr double kHeumanSwitch = 0.05;

/// sqrt(1 - nu) * Pi(1; nu, t), with 1 - nu supplied separately so callers
/// that know it exactly (as (A + B) / B) avoid forming 1 - nu by subtraction.
inline double scaled_complete_Pi(double nu, double one_minus_nu, const Modulus& t) {
  const double t2 = t.squared();
  const auto sums = agm_sums(t);
  const double root = std::sqrt(one_minus_nu);
  if (nu > std::max(t2, 1.0 - kHeumanSwitch)) {
    const double kc2 = t.complement_squared();
    const double eps = std::asin(std::min(1.0, std::sqrt(one_minus_nu / kc2)));
    const double lambda0 = heuman_lambda(eps, t);
    return root * sums.K +
           std::numbers::pi * std::sqrt(nu) * (1.0 - lambda0) / (2.0 * std::sqrt(nu - t2));
  }
  const double rj = carlson_rj(0.0, t.complement_squared(), 1.0, one_minus_nu);
  return root * (sums.K + nu / 3.0 * rj);
}

inline void require_parameter(double nu) {
  require_finite(nu, "characteristic");
  if (nu >= 1.0) {
    throw DomainError("characteristic nu must be < 1: got " + std::to_string(nu));
  }
}

}  // namespace detail

/// Complete elliptic integral of the third kind,
///   Pi(1; nu, t) = int_0^1 du / ((1 - nu u^2) sqrt(1 - u^2) sqrt(1 - t^2 u^2)).
/// Uses the Heuman-Lambda representation when nu > max(t^2, 0.95).
inline double complete_Pi(double nu, const Modulus& t) {
  detail::require_parameter(nu);
  if (nu == 0.0) return complete_K(t);
  const double one_minus_nu = 1.0 - nu;
  return detail::scaled_complete_Pi(nu, one_minus_nu, t) / std::sqrt(one_minus_nu);
}

/// Incomplete third-kind integral in the Jacobi form,
///   Pi(sn; nu, t) = int_0^sn du / ((1 - nu u^2) sqrt(1 - u^2) sqrt(1 - t^2 u^2)),
/// evaluated from a triple with cn >= 0 (amplitude in [0, pi/2]).
/// `one_minus_nu` must equal 1 - nu; it is passed so callers can supply it
/// without cancellation.
inline double incomplete_Pi(const JacobiTriple& j, double nu, double one_minus_nu) {
  detail::require_parameter(nu);
  if (j.cn < 0.0 || j.sn < 0.0) {
    throw DomainError("incomplete_Pi: amplitude outside [0, pi/2]");
  }
  const double s = j.sn;
  if (s == 0.0) return 0.0;
  const double c2 = j.cn * j.cn;
  const double d2 = j.dn * j.dn;
  const double rf = detail::carlson_rf(c2, d2, 1.0);
  if (nu == 0.0) return s * rf;
  const double p = one_minus_nu + nu * c2;  // 1 - nu sn^2
  return s * rf + nu / 3.0 * s * s * s * detail::carlson_rj(c2, d2, 1.0, p);
}

}  // namespace nlsband
