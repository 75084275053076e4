#pragma once

// Adaptive quadrature used as an independent oracle: by tests to cross-check
// the closed forms, and by the verification and edge-normalization paths of
// the solution module. Backed by Boost's double-exponential (tanh-sinh) rule,
// which tolerates inverse-square-root endpoint singularities and never
// evaluates the integrand at an endpoint.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nlsband/errors.hpp"

namespace nlsband {

/// Refinement levels available to the oracle before it gives up.
inline constexpr std::size_t kOracleMaxRefinements = 15;

namespace detail {
inline constexpr double kOracleMargin = 1e-2;
inline constexpr double kRelFloor = 1e-15;
}  // namespace detail

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline boost::math::quadrature::tanh_sinh<double>& oracle_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(kOracleMaxRefinements);
  return rule;
}

}  // namespace detail

/// int_a^b f(x) dx with absolute error estimate <= tol.
/// Throws OracleError ("oracle did not converge") when the refinement budget
/// runs out first.
template <class F>
double quad_oracle(F&& f, double a, double b, double tol = 1e-12) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("quad_oracle: need finite a < b");
  }
  if (!(tol > 0.0)) throw DomainError("quad_oracle: tolerance must be positive");
  auto& rule = detail::oracle_rule();
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  double value = 0.0;
  try {
    // Boost's tolerance is relative to the L1 norm and its stopping test is
    // looser than the returned estimate, so ask for a margin below tol.
    value = rule.integrate(f, a, b, std::max(detail::kOracleMargin * tol, detail::kRelFloor), &err, &l1, &levels);
    if (std::isfinite(value) && err > tol && l1 > 1.0) {
      value = rule.integrate(f, a, b, std::max(detail::kOracleMargin * tol / l1, detail::kRelFloor), &err, &l1,
                             &levels);
    }
  } catch (const std::exception& e) {
    throw OracleError(std::string("oracle did not converge: ") + e.what());
  }
  if (!std::isfinite(value) || !(err <= tol)) {
    throw OracleError("oracle did not converge on [" + detail::sci(a) + ", " +
                      detail::sci(b) + "]: error estimate " + detail::sci(err) + " > " + detail::sci(tol) + ", L1 " + detail::sci(l1));
  }
  return value;
}

/// Piecewise version: integrates over consecutive breakpoints (including both
/// ends), giving each piece an equal share of the tolerance. Use it to put a
/// breakpoint on an interior peak or kink.
template <class F>
double quad_oracle(F&& f, std::span<const double> breakpoints, double tol = 1e-12) {
  if (breakpoints.size() < 2) throw DomainError("quad_oracle: need at least two breakpoints");
  const double share = tol / static_cast<double>(breakpoints.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    total += quad_oracle(f, breakpoints[i], breakpoints[i + 1], share);
  }
  return total;
}

}  // namespace nlsband
