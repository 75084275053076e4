#pragma once

// Quadrature oracles for the special functions and band quantities. They use
// only the defining integrals (and, where stated, the library's sn), never
// the AGM/Landen/Carlson paths under test.

#include <cmath>
#include <numbers>

#include "nlsband/nlsband.hpp"

namespace nlsband::oracle {

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

// 1 - m sin^2(theta) as cos^2 + (1 - m) sin^2. A positive dist_to_half_pi
// (tanh-sinh's distance to the right end, pi/2) gives cos without rounding.
inline double one_minus_m_sin2(double theta, double dist_to_half_pi, double one_minus_m) {
  const double s = std::sin(theta);
  const double c = dist_to_half_pi > 0.0 ? std::sin(dist_to_half_pi) : std::cos(theta);
  return c * c + one_minus_m * s * s;
}

/// K(t) = int_0^{pi/2} dtheta / sqrt(1 - t^2 sin^2)
inline double K(double t, double tol = 1e-13) {
  const double mc = (1.0 - t) * (1.0 + t);
  return quad_oracle(
      [&](double th, double thc) { return 1.0 / std::sqrt(one_minus_m_sin2(th, thc, mc)); },
      0.0, kHalfPi, tol);
}

inline double E(double t, double tol = 1e-13) {
  const double mc = (1.0 - t) * (1.0 + t);
  return quad_oracle(
      [&](double th, double thc) { return std::sqrt(one_minus_m_sin2(th, thc, mc)); }, 0.0,
      kHalfPi, tol);
}

inline double F(double phi, double t, double tol = 1e-13) {
  return quad_oracle([&](double th) { return 1.0 / std::sqrt(1.0 - t * t * std::sin(th) * std::sin(th)); },
                     0.0, phi, tol);
}

inline double E_inc(double phi, double t, double tol = 1e-13) {
  return quad_oracle([&](double th) { return std::sqrt(1.0 - t * t * std::sin(th) * std::sin(th)); },
                     0.0, phi, tol);
}

/// Pi(nu; t) = int_0^{pi/2} dtheta / ((1 - nu sin^2) sqrt(1 - t^2 sin^2)),
/// split at pi/2 - 4 sqrt(1 - nu) when the nu-peak is narrow.
inline double Pi(double nu, double t, double tol = 1e-11) {
  const double mc = (1.0 - t) * (1.0 + t);
  auto f = [&](double th, double dist) {
    return 1.0 / (one_minus_m_sin2(th, dist, 1.0 - nu) * std::sqrt(one_minus_m_sin2(th, dist, mc)));
  };
  if (nu > 0.9) {
    const double split = kHalfPi - 4.0 * std::sqrt(1.0 - nu);
    return quad_oracle([&](double th) { return f(th, -1.0); }, 0.0, split, tol / 2) +
           quad_oracle(f, split, kHalfPi, tol / 2);
  }
  return quad_oracle(f, 0.0, kHalfPi, tol);
}

/// F1(t) = int_0^1 sn^2(2K x; t) dx with the library's sn.
inline double F1(double t, double tol = 1e-13) {
  const Modulus mod(t);
  const double q = 2.0 * complete_K(mod);
  auto f = [&](double x) {
    const double s = jacobi(q * x, mod).sn;
    return s * s;
  };
  const double b[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  return quad_oracle(f, b, tol);
}

/// sn(x; t) = sin(phi) with F(phi, t) = x, phi found by bisection on the
/// quadrature F. Valid for 0 <= x <= K(t).
inline double sn_by_inversion(double x, double t) {
  double lo = 0.0, hi = kHalfPi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (F(mid, t, 1e-14) < x ? lo : hi) = mid;
  }
  return std::sin(0.5 * (lo + hi));
}

/// theta(x) = int_0^x C1 / rho^2, with the peak at 1/2 used as a breakpoint.
inline double theta(const StationarySolution& sol, double x, double tol = 1e-12) {
  auto f = [&](double u) { return sol.C1() / (sol.rho(u) * sol.rho(u)); };
  if (x <= 0.5) return quad_oracle(f, 0.0, x, tol);
  const double b[] = {0.0, 0.5, x};
  return quad_oracle(f, b, tol);
}

}  // namespace nlsband::oracle
