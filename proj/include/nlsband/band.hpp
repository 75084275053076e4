#pragma once

// Quantization rule and first band function of the cubic NLS on [0, 1] with
// quasi-periodic boundary conditions.
//
// A stationary solution phi = rho e^{i theta} has
//   rho^2(x) = A sn^2(q x; t) + B,   q = 2K(t),
//   A = 8 K^2 t^2 / alpha,           B = 1 - A F1(t),
//   mu = G(t) + 3 alpha / 2,         C1^2 = (B/4)(A + B)(2 alpha B + 4 q^2),
// and is admissible iff B > 0, A + B > 0 and C1^2 > 0. The band edges are
// the roots of three monotone threshold functions of t (see *_threshold).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "nlsband/elliptic.hpp"
#include "nlsband/errors.hpp"
#include "nlsband/tolerances.hpp"

namespace nlsband {

/// Attractive coupling threshold L = 2 pi^2 = lim_{t->0} 8 K^2 (1 - t^2 F1).
inline constexpr double kThresholdL = 2.0 * std::numbers::pi * std::numbers::pi;

enum class Regime { AttractiveStrong, AttractiveWeak, Repulsive };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::AttractiveStrong: return "attractive_strong";
    case Regime::AttractiveWeak: return "attractive_weak";
    case Regime::Repulsive: return "repulsive";
  }
  return "?";
}

/// Coupling alpha of the cubic term together with its regime.
struct Nonlinearity {
  double alpha;
  Regime regime;

  explicit Nonlinearity(double a) : alpha(a), regime(classify(a)) {}

  static Regime classify(double a) {
    if (!std::isfinite(a)) throw DomainError("alpha must be finite");
    if (a == 0.0) throw DomainError("band width is zero at alpha=0");
    if (a < -kThresholdL) return Regime::AttractiveStrong;
    if (a < 0.0) return Regime::AttractiveWeak;
    return Regime::Repulsive;
  }
};

/// Closed-form parameters of one stationary solution.
struct SolutionParams {
  Modulus t;
  double q;
  double A;
  double B;
  double a_plus_b;  // A + B, formed as 1 + A F2 to keep precision at the lower edge
  double C1;
  double C2;
  double mu;
  double k;
  double alpha;
  int ell;

  double c1_squared() const { return C1 * C1; }
};

struct BandEdges {
  double alpha;
  Regime regime;
  Modulus t_m;  // lower energy edge mu_m
  Modulus t_M;  // upper energy edge mu_M
  double mu_m;
  double mu_M;
  double k_m;
  double k_M;
  bool k_m_at_edge;  // k_m is a band-edge limit, approached but not attained
  bool k_M_at_edge;
};

struct DispersionCurve {
  double alpha;
  int ell;
  std::vector<SolutionParams> rows;  // sorted by increasing t (decreasing mu)
};

// ---------------------------------------------------------------------------
// Period averages and threshold functions.

/// Below this modulus F1 returns its two-term series.
inline constexpr double kF1SeriesSwitch = 1e-3;

/// F1(t) = int_0^1 sn^2(2K x; t) dx = (K - E) / (K t^2).
inline double F1(const Modulus& t) {
  if (t.value() < kF1SeriesSwitch) return 0.5 + t.squared() / 16.0;
  return detail::agm_sums(t).F1;
}

/// F2(t) = 1 - F1(t) = int_0^1 cn^2(2K x; t) dx.
inline double F2(const Modulus& t) { return 1.0 - F1(t); }

/// G(t) = 4 K^2 [(1 + t^2) - 3 t^2 F1]; strictly decreasing from pi^2.
inline double G(const Modulus& t) {
  const auto s = detail::agm_sums(t);
  return 4.0 * s.K * s.K * (1.0 + t.squared() - 3.0 * t.squared() * s.F1);
}

/// 8 K^2 (1 - t^2 F1) = 8 K E. Its root at -alpha is t1 (dn-profile edge).
inline double dn_threshold(const Modulus& t) {
  const auto s = detail::agm_sums(t);
  return 8.0 * s.K * s.E;
}

/// 8 K^2 t^2 F2. Its root at -alpha is t2 (cn-profile edge, alpha < 0).
inline double cn_threshold(const Modulus& t) {
  const auto s = detail::agm_sums(t);
  return 8.0 * s.K * s.K * t.squared() * (1.0 - s.F1);
}

/// 8 K^2 t^2 F1. Its root at alpha is t3 (sn-profile edge, alpha > 0).
inline double sn_threshold(const Modulus& t) {
  const auto s = detail::agm_sums(t);
  return 8.0 * s.K * s.K * t.squared() * s.F1;
}

// ---------------------------------------------------------------------------
// Edge roots.

namespace detail {

inline void require_ground_band(int ell) {
  if (ell != 1) {
    throw NotImplementedError("band index ell = " + std::to_string(ell) +
                              " not implemented (only ell = 1)");
  }
}

/// Root of increasing f(t) = target on [0, kMaxModulus], bisected to
/// floating-point resolution.
template <class F>
double bisect_increasing(F&& f, double target, const Tolerances& tol, double scale,
                         const char* what) {
  double lo = 0.0;
  double hi = kMaxModulus;
  if (!(f(lo) < target) || !(f(hi) > target)) {
    throw NumericalFailure(std::string(what) + ": root not bracketed in [0, 1 - 1e-12]");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) < target ? lo : hi) = mid;
  }
  if (hi - lo > tol.root_t) throw NumericalFailure(std::string(what) + ": bracket too wide");
  const double t = std::abs(f(lo) - target) <= std::abs(f(hi) - target) ? lo : hi;
  const double residual = std::abs(f(t) - target);
  if (residual > tol.root_residual * std::max(1.0, scale)) {
    throw NumericalFailure(std::string(what) + ": residual " + std::to_string(residual));
  }
  return t;
}

}  // namespace detail

/// t1: 8 K^2 (1 - t^2 F1) = -alpha, for alpha < -L.
inline Modulus solve_t1(double alpha, const Tolerances& tol = {}) {
  if (!(alpha < -kThresholdL)) throw DomainError("solve_t1 requires alpha < -2 pi^2");
  return Modulus(detail::bisect_increasing(
      [](double t) { return dn_threshold(Modulus(t)); }, -alpha, tol, std::abs(alpha),
      "solve_t1"));
}

/// t2: 8 K^2 t^2 F2 = -alpha, for alpha < 0.
inline Modulus solve_t2(double alpha, const Tolerances& tol = {}) {
  if (!(alpha < 0.0)) throw DomainError("solve_t2 requires alpha < 0");
  return Modulus(detail::bisect_increasing(
      [](double t) { return cn_threshold(Modulus(t)); }, -alpha, tol, std::abs(alpha),
      "solve_t2"));
}

/// t3: 8 K^2 t^2 F1 = alpha, for alpha > 0.
inline Modulus solve_t3(double alpha, const Tolerances& tol = {}) {
  if (!(alpha > 0.0)) throw DomainError("solve_t3 requires alpha > 0");
  return Modulus(detail::bisect_increasing(
      [](double t) { return sn_threshold(Modulus(t)); }, alpha, tol, std::abs(alpha),
      "solve_t3"));
}

/// Energy band (mu_m, mu_M) and the moduli at its edges; no k information.
struct EnergyWindow {
  Nonlinearity nl;
  Modulus t_m;
  Modulus t_M;
  double mu_m;
  double mu_M;
};

inline EnergyWindow energy_window(double alpha, const Tolerances& tol = {}) {
  const Nonlinearity nl(alpha);
  const Modulus t_M = nl.regime == Regime::AttractiveStrong ? solve_t1(alpha, tol) : Modulus(0.0);
  const Modulus t_m = alpha < 0.0 ? solve_t2(alpha, tol) : solve_t3(alpha, tol);
  return {nl, t_m, t_M, G(t_m) + 1.5 * alpha, G(t_M) + 1.5 * alpha};
}

// ---------------------------------------------------------------------------
// Parameters and quasimomentum.

namespace detail {

/// k = sqrt((1 + A/B)(2 alpha B + 4 q^2)) / (2K) * Pi(1; -A/B, t)
///   = sqrt(2 (alpha + 8 K E)) / (2K) * [sqrt(1 - nu) Pi(1; nu, t)],  nu = -A/B.
inline double quasimomentum(const Modulus& t, const AgmSums& s, double alpha, double A,
                            double B, double a_plus_b) {
  const double nu = -A / B;
  const double one_minus_nu = a_plus_b / B;
  const double energy_term = 2.0 * (alpha + 8.0 * s.K * s.E);
  return std::sqrt(energy_term) / (2.0 * s.K) * scaled_complete_Pi(nu, one_minus_nu, t);
}

}  // namespace detail

/// Full parameter set at modulus t. Throws ConstraintViolation naming the
/// first failed inequality of the quantization rule.
inline SolutionParams params_from_t(const Modulus& t, double alpha, int ell = 1) {
  const Nonlinearity nl(alpha);
  detail::require_ground_band(ell);
  const auto s = detail::agm_sums(t);
  const double t2 = t.squared();
  const double q = 2.0 * ell * s.K;
  const double A = 2.0 * q * q * t2 / alpha;
  const double B = 1.0 - A * s.F1;
  if (!(B > 0.0)) throw ConstraintViolation(Constraint::BPositive, B);
  const double a_plus_b = 1.0 + A * (1.0 - s.F1);
  if (!(a_plus_b > 0.0)) throw ConstraintViolation(Constraint::APlusBPositive, a_plus_b);
  // 2 alpha B + 4 q^2 = 2 (alpha + 8 K E) when q = 2K.
  const double energy_term = 2.0 * (alpha + 8.0 * s.K * s.E);
  const double c1_sq = B / 4.0 * a_plus_b * energy_term;
  if (!(c1_sq > 0.0)) throw ConstraintViolation(Constraint::C1SquaredPositive, c1_sq);

  SolutionParams p{t, q, A, B, a_plus_b, std::sqrt(c1_sq), 0.0, 0.0, 0.0, alpha, ell};
  p.mu = 4.0 * s.K * s.K * (1.0 + t2 - 3.0 * t2 * s.F1) + 1.5 * alpha;
  p.C2 = -0.5 * alpha * A * B - B * q * q - 0.75 * alpha * B * B - 0.5 * A * q * q;
  p.k = detail::quasimomentum(t, s, alpha, A, B, a_plus_b);
  return p;
}

/// Quasimomentum k(t) > 0 along the first band.
inline double k_of_t(const Modulus& t, double alpha) { return params_from_t(t, alpha).k; }

/// lim k as t -> t_M: 0 past the strong-attraction threshold (C1 -> 0),
/// sqrt(alpha/2 + pi^2) otherwise (plane-wave edge).
inline double k_limit_upper_edge(double alpha) {
  if (alpha < -kThresholdL) return 0.0;
  return std::sqrt(alpha / 2.0 + std::numbers::pi * std::numbers::pi);
}

/// lim k as t -> t_m (both signs of alpha).
inline constexpr double kLowerEdgeK = std::numbers::pi;

/// Unique t in (t_M, t_m) with G(t) = mu - 1.5 alpha.
inline Modulus t_of_mu(double mu, const EnergyWindow& w, const Tolerances& tol = {}) {
  if (!std::isfinite(mu) || !(mu > w.mu_m) || !(mu < w.mu_M)) {
    throw OutOfBandError("mu outside the open band (" + std::to_string(w.mu_m) + ", " +
                             std::to_string(w.mu_M) + ")",
                         w.mu_m, w.mu_M);
  }
  const double target = mu - 1.5 * w.nl.alpha;
  double lo = w.t_M.value();  // G(lo) > target
  double hi = w.t_m.value();  // G(hi) < target
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (G(Modulus(mid)) > target ? lo : hi) = mid;
  }
  const double r_lo = std::abs(G(Modulus(lo)) - target);
  const double r_hi = std::abs(G(Modulus(hi)) - target);
  const double t = r_lo <= r_hi ? lo : hi;
  if (std::min(r_lo, r_hi) > tol.mu_match * std::max(1.0, std::abs(mu))) {
    throw NumericalFailure("t_of_mu: residual above tolerance");
  }
  return Modulus(t);
}

inline Modulus t_of_mu(double mu, double alpha, const Tolerances& tol = {}) {
  return t_of_mu(mu, energy_window(alpha, tol), tol);
}

// ---------------------------------------------------------------------------
// Grids, sweeps, and the inverted dispersion relation.

/// n moduli strictly inside (t_M, t_m): a uniform core plus geometric
/// clusters (ratio grid_factor, up to grid_levels points) toward each edge.
inline std::vector<double> band_grid(const EnergyWindow& w, int n, const Tolerances& tol = {}) {
  if (n < 2) throw DomainError("band grid needs n >= 2");
  const double lo = w.t_M.value();
  const double width = w.t_m.value() - lo;
  const int levels = std::min(static_cast<int>(tol.grid_levels), (n - 2) / 4);
  const int n_mid = n - 2 * levels;
  const double h = 1.0 / (n_mid + 1);
  std::vector<double> u;
  u.reserve(static_cast<std::size_t>(n));
  double offset = h;
  for (int j = 0; j < levels; ++j) {
    offset /= tol.grid_factor;
    u.push_back(offset);
    u.push_back(1.0 - offset);
  }
  for (int i = 1; i <= n_mid; ++i) u.push_back(i * h);
  std::sort(u.begin(), u.end());
  std::vector<double> ts;
  ts.reserve(u.size());
  for (double v : u) ts.push_back(lo + width * v);
  return ts;
}

/// Samples the first band at n admissible moduli.
inline DispersionCurve sweep_band(double alpha, int n, const Tolerances& tol = {}) {
  const auto w = energy_window(alpha, tol);
  DispersionCurve curve{alpha, 1, {}};
  for (double t : band_grid(w, n, tol)) curve.rows.push_back(params_from_t(Modulus(t), alpha));
  return curve;
}

/// Regime-dispatched band edges, including inf/sup of k over the open band.
inline BandEdges solve_band_edges(double alpha, const Tolerances& tol = {}) {
  const auto w = energy_window(alpha, tol);
  const double k_upper = k_limit_upper_edge(alpha);
  double k_min = std::min(k_upper, kLowerEdgeK);
  double k_max = std::max(k_upper, kLowerEdgeK);
  bool min_at_edge = true;
  bool max_at_edge = true;
  for (double t : band_grid(w, 256, tol)) {
    const double k = k_of_t(Modulus(t), alpha);
    if (k < k_min) {
      k_min = k;
      min_at_edge = false;
    }
    if (k > k_max) {
      k_max = k;
      max_at_edge = false;
    }
  }
  return {alpha, w.nl.regime, w.t_m, w.t_M, w.mu_m, w.mu_M, k_min, k_max, min_at_edge,
          max_at_edge};
}

/// All band energies mu with k(mu) = k, ordered by mu. Monotonicity of k
/// along the band is not assumed, so every crossing of the sampled curve
/// (grid >= 64 interior samples plus the two edge limits) is refined.
inline std::vector<double> mu_of_k(double k, double alpha, int grid = 64,
                                   const Tolerances& tol = {}) {
  if (grid < 64) throw DomainError("mu_of_k needs grid >= 64");
  if (!std::isfinite(k)) throw DomainError("k must be finite");
  const auto w = energy_window(alpha, tol);

  struct Node {
    double t;
    double k;
    bool interior;
  };
  std::vector<Node> nodes;
  nodes.push_back({w.t_M.value(), k_limit_upper_edge(alpha), false});
  for (double t : band_grid(w, grid, tol)) nodes.push_back({t, k_of_t(Modulus(t), alpha), true});
  nodes.push_back({w.t_m.value(), kLowerEdgeK, false});

  double k_lo = nodes.front().k, k_hi = nodes.front().k;
  for (const auto& n : nodes) {
    k_lo = std::min(k_lo, n.k);
    k_hi = std::max(k_hi, n.k);
  }
  if (!(k > k_lo && k < k_hi)) {
    throw OutOfBandError("k outside the achieved range (" + std::to_string(k_lo) + ", " +
                             std::to_string(k_hi) + ")",
                         k_lo, k_hi);
  }

  std::vector<double> roots_t;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const Node& a = nodes[i];
    const Node& b = nodes[i + 1];
    const double fa = a.k - k;
    const double fb = b.k - k;
    if (fa == 0.0 && a.interior) {
      roots_t.push_back(a.t);
      continue;
    }
    if (!(fa * fb < 0.0)) continue;
    double lo = a.t, hi = b.t, flo = fa;
    double best_t = std::numeric_limits<double>::quiet_NaN();
    double best_f = std::numeric_limits<double>::infinity();
    try {
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = k_of_t(Modulus(mid), alpha) - k;
        if (std::abs(fm) < best_f) {
          best_f = std::abs(fm);
          best_t = mid;
        }
        if (fm == 0.0) break;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
    } catch (const ConstraintViolation&) {
      // Only reachable within rounding distance of an edge.
    }
    if (!(best_f <= tol.k_match)) {
      throw NumericalFailure("mu_of_k: unresolved bracket near t = " + std::to_string(best_t));
    }
    roots_t.push_back(best_t);
  }

  std::vector<double> mus;
  mus.reserve(roots_t.size());
  for (double t : roots_t) mus.push_back(G(Modulus(t)) + 1.5 * alpha);
  std::sort(mus.begin(), mus.end());
  return mus;
}

}  // namespace nlsband
