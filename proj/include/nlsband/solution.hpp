#pragma once

// Stationary solutions phi(x) = rho(x) e^{i theta(x)} built from band
// parameters, the degenerate edge profiles, and their verification against
//   -phi'' + alpha |phi|^2 phi = mu phi,   int_0^1 |phi|^2 = 1,
//   phi(1) = e^{ik} phi(0),  phi'(1) = e^{ik} phi'(0).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "nlsband/band.hpp"
#include "nlsband/elliptic.hpp"
#include "nlsband/errors.hpp"
#include "nlsband/quadrature.hpp"
#include "nlsband/tolerances.hpp"

namespace nlsband {

using Complex = std::complex<double>;

enum class SolutionKind { Generic, PlaneWave, RealSn, RealCn, RealDn };

inline const char* to_string(SolutionKind k) {
  switch (k) {
    case SolutionKind::Generic: return "generic";
    case SolutionKind::PlaneWave: return "plane_wave";
    case SolutionKind::RealSn: return "real_sn";
    case SolutionKind::RealCn: return "real_cn";
    case SolutionKind::RealDn: return "real_dn";
  }
  return "?";
}

/// Value and analytic derivatives of a solution at one point.
struct PointValue {
  Complex phi;
  Complex dphi;
  Complex d2phi;
  double rho;
  double theta;
};

struct SolutionSample {
  double x;
  double rho;
  double theta;
  double re_phi;
  double im_phi;
};

class StationarySolution;
inline StationarySolution build(const SolutionParams& params);
inline StationarySolution plane_wave(double k, double alpha);
inline StationarySolution edge_solution_mu_M(double alpha, const Tolerances& tol);
inline StationarySolution edge_solution_mu_m(double alpha, const Tolerances& tol);
namespace detail {
inline StationarySolution make_real_edge(SolutionKind kind, const Modulus& t, double alpha, double k,
                                  const Tolerances& tol);
}

/// Immutable solution on the real line. Inside [0, 1] the closed forms are
/// evaluated directly; outside, theta is continued by theta(x + 1) = theta(x) + k
/// (rho is 1-periodic by construction). `shifted(x0)` gives phi(x - x0).
class StationarySolution {
 public:
  SolutionKind kind() const { return kind_; }
  const SolutionParams& params() const { return params_; }
  double mu() const { return params_.mu; }
  double k() const { return params_.k; }
  double alpha() const { return params_.alpha; }
  double C1() const { return params_.C1; }
  double C2() const { return params_.C2; }
  /// Real-branch prefactor C (1 for plane waves, unused for Generic).
  double amplitude() const { return amplitude_; }
  double shift() const { return shift_; }

  StationarySolution shifted(double x0) const {
    StationarySolution s = *this;
    s.shift_ += x0;
    return s;
  }

  PointValue eval(double x) const {
    const double y = x - shift_;
    switch (kind_) {
      case SolutionKind::Generic: return eval_generic(y);
      case SolutionKind::PlaneWave: return eval_plane(y);
      default: return eval_real(y);
    }
  }

  Complex phi(double x) const { return eval(x).phi; }
  double rho(double x) const { return eval(x).rho; }
  double theta(double x) const { return eval(x).theta; }

  /// theta on the base period [0, 1]: closed form on [0, 1/2], reflection
  /// theta(x) = k - theta(1 - x) on (1/2, 1].
  double theta_base(double r) const {
    if (kind_ != SolutionKind::Generic) return eval(r + shift_).theta;
    if (r == 0.5) return 0.5 * params_.k;
    if (r < 0.5) return params_.C1 / params_.q * pi_sn_scaled(jacobi(params_.q * r, params_.t));
    return params_.k - theta_base(1.0 - r);
  }

  /// int_0^{q r} dv / (A sn^2 v + B) for r in [0, 1/2].
  double pi_sn_scaled(const JacobiTriple& j) const {
    const double nu = -params_.A / params_.B;
    const double one_minus_nu = params_.a_plus_b / params_.B;
    return incomplete_Pi({j.sn, std::abs(j.cn), j.dn}, nu, one_minus_nu) / params_.B;
  }

 private:
  friend StationarySolution build(const SolutionParams& params);
  friend StationarySolution plane_wave(double k, double alpha);
  friend StationarySolution edge_solution_mu_M(double alpha, const Tolerances& tol);
  friend StationarySolution edge_solution_mu_m(double alpha, const Tolerances& tol);
  friend StationarySolution detail::make_real_edge(SolutionKind kind, const Modulus& t,
                                                   double alpha, double k, const Tolerances& tol);

  StationarySolution(SolutionKind kind, const SolutionParams& p, double amplitude)
      : kind_(kind), params_(p), amplitude_(amplitude) {}

  PointValue eval_generic(double y) const {
    const auto& p = params_;
    const double t2 = p.t.squared();
    const auto j = jacobi(p.q * y, p.t);
    const double s2 = j.sn * j.sn, c2 = j.cn * j.cn, d2 = j.dn * j.dn;
    // rho^2 = B + A sn^2 = (A + B) - A cn^2; take the form without cancellation.
    const double z = s2 <= 0.5 ? p.B + p.A * s2 : p.a_plus_b - p.A * c2;
    const double dz = 2.0 * p.A * p.q * j.sn * j.cn * j.dn;
    const double d2z = 2.0 * p.A * p.q * p.q * (c2 * d2 - s2 * d2 - t2 * s2 * c2);
    const double rho = std::sqrt(z);
    const double drho = dz / (2.0 * rho);
    const double d2rho = (2.0 * z * d2z - dz * dz) / (4.0 * z * rho);
    const double dtheta = p.C1 / z;
    const double d2theta = -p.C1 * dz / (z * z);

    double theta;
    if (y >= 0.0 && y <= 1.0) {
      theta = theta_base(y);
    } else {
      const double n = std::floor(y);
      theta = n * p.k + theta_base(y - n);
    }
    const Complex e = std::polar(1.0, theta);
    const Complex phi = rho * e;
    const Complex dphi = Complex(drho, rho * dtheta) * e;
    const Complex d2phi =
        Complex(d2rho - rho * dtheta * dtheta, 2.0 * drho * dtheta + rho * d2theta) * e;
    return {phi, dphi, d2phi, rho, theta};
  }

  PointValue eval_plane(double y) const {
    const double k = params_.k;
    const Complex phi = std::polar(amplitude_, k * y);
    return {phi, Complex(0.0, k) * phi, -k * k * phi, amplitude_, k * y};
  }

  PointValue eval_real(double y) const {
    const auto& p = params_;
    const double t2 = p.t.squared();
    const auto j = jacobi(p.q * y, p.t);
    double f = 0.0, df = 0.0, d2f = 0.0;
    switch (kind_) {
      case SolutionKind::RealSn:
        f = j.sn;
        df = j.cn * j.dn;
        d2f = -j.sn * (j.dn * j.dn + t2 * j.cn * j.cn);
        break;
      case SolutionKind::RealCn:
        f = j.cn;
        df = -j.sn * j.dn;
        d2f = -j.cn * (j.dn * j.dn - t2 * j.sn * j.sn);
        break;
      default:
        f = j.dn;
        df = -t2 * j.sn * j.cn;
        d2f = -t2 * j.dn * (j.cn * j.cn - j.sn * j.sn);
        break;
    }
    const double c = amplitude_;
    const double value = c * f;
    return {Complex(value, 0.0), Complex(c * p.q * df, 0.0), Complex(c * p.q * p.q * d2f, 0.0),
            std::abs(value), value < 0.0 ? std::numbers::pi : 0.0};
  }

  SolutionKind kind_;
  SolutionParams params_;
  double amplitude_;
  double shift_ = 0.0;
};

// ---------------------------------------------------------------------------
// Constructors.

/// Generic complex solution from validated parameters.
inline StationarySolution build(const SolutionParams& p) {
  detail::require_ground_band(p.ell);
  if (!(p.B > 0.0)) throw ConstraintViolation(Constraint::BPositive, p.B);
  if (!(p.a_plus_b > 0.0)) throw ConstraintViolation(Constraint::APlusBPositive, p.a_plus_b);
  if (!(p.C1 > 0.0)) throw ConstraintViolation(Constraint::C1SquaredPositive, p.C1 * p.C1);
  return StationarySolution(SolutionKind::Generic, p, 1.0);
}

/// int_0^{q x} dv / (A sn^2(v; t) + B) = Pi(sn(q x); -A/B, t) / B, for
/// q x in [0, K(t)], i.e. x in [0, 1/2]. theta(x) = (C1 / q) times this.
inline double incomplete_Pi_sn(double x, const SolutionParams& p) {
  if (!(x >= 0.0 && x <= 0.5)) {
    throw DomainError("incomplete_Pi_sn: q x must lie in [0, K(t)] (x in [0, 1/2])");
  }
  if (p.B == 0.0) throw DomainError("incomplete_Pi_sn: B must be nonzero");
  return build(p).pi_sn_scaled(jacobi(p.q * x, p.t));
}

/// phi(x) = e^{ikx}, mu = k^2 + alpha.
inline StationarySolution plane_wave(double k, double alpha) {
  detail::require_finite(k, "k");
  detail::require_finite(alpha, "alpha");
  SolutionParams p{Modulus(0.0), std::numbers::pi, 0.0, 1.0, 1.0, k, -k * k - 0.25 * alpha,
                   k * k + alpha, k, alpha, 1};
  return StationarySolution(SolutionKind::PlaneWave, p, 1.0);
}

/// Degenerate solution at the upper energy edge mu_M: the plane wave
/// k = sqrt(alpha/2 + pi^2) for alpha >= -L, else the real dn profile at t1.
inline StationarySolution edge_solution_mu_M(double alpha, const Tolerances& tol = {}) {
  const Nonlinearity nl(alpha);
  if (nl.regime != Regime::AttractiveStrong) return plane_wave(k_limit_upper_edge(alpha), alpha);
  return detail::make_real_edge(SolutionKind::RealDn, solve_t1(alpha, tol), alpha, 0.0, tol);
}

/// Degenerate solution at the lower energy edge mu_m: cn profile at t2
/// (alpha < 0) or sn profile at t3 (alpha > 0); both have k = pi.
inline StationarySolution edge_solution_mu_m(double alpha, const Tolerances& tol = {}) {
  const Nonlinearity nl(alpha);
  if (alpha < 0.0) {
    return detail::make_real_edge(SolutionKind::RealCn, solve_t2(alpha, tol), alpha,
                                  std::numbers::pi, tol);
  }
  return detail::make_real_edge(SolutionKind::RealSn, solve_t3(alpha, tol), alpha,
                                std::numbers::pi, tol);
}

namespace detail {

/// Real profile C f(2K x; t), with C fixed by quadrature of f^2 over [0, 1].
inline StationarySolution make_real_edge(SolutionKind kind, const Modulus& t, double alpha,
                                         double k, const Tolerances& tol) {
  const double q = 2.0 * complete_K(t);
  auto profile = [&](double x) {
    const auto j = jacobi(q * x, t);
    const double f = kind == SolutionKind::RealSn ? j.sn
                     : kind == SolutionKind::RealCn ? j.cn
                                                    : j.dn;
    return f * f;
  };
  const double breaks[] = {0.0, 0.5, 1.0};
  const double norm2 = quad_oracle(profile, breaks, tol.quad);
  const double c = 1.0 / std::sqrt(norm2);
  const double c2 = c * c;
  // |phi|^2 = A sn^2 + B with C1 = 0.
  double A = 0.0, B = 0.0, a_plus_b = 0.0;
  switch (kind) {
    case SolutionKind::RealSn: A = c2; B = 0.0; a_plus_b = c2; break;
    case SolutionKind::RealCn: A = -c2; B = c2; a_plus_b = 0.0; break;
    default: A = -c2 * t.squared(); B = c2; a_plus_b = c2 * t.complement_squared(); break;
  }
  SolutionParams p{t, q, A, B, a_plus_b, 0.0, 0.0, G(t) + 1.5 * alpha, k, alpha, 1};
  p.C2 = -0.5 * alpha * A * B - B * q * q - 0.75 * alpha * B * B - 0.5 * A * q * q;
  return StationarySolution(kind, p, c);
}

}  // namespace detail

/// mu of the real sn branch under periodic (k = 0 mod 2 pi) or out-of-phase
/// (k = (2n + 1) pi) boundary conditions.
enum class BoundaryPhase { Periodic, OutOfPhase };

inline double real_branch_mu(int n, const Modulus& t, BoundaryPhase phase) {
  if (n < 0) throw DomainError("real_branch_mu: n must be >= 0");
  const double K = complete_K(t);
  const double base = K * K * (1.0 + t.squared());
  const double m = static_cast<double>(n);
  return phase == BoundaryPhase::Periodic ? 16.0 * (m + 1.0) * (m + 1.0) * base
                                          : 4.0 * (2.0 * m + 1.0) * (2.0 * m + 1.0) * base;
}

// ---------------------------------------------------------------------------
// Verification.

namespace detail {

inline Complex ode_defect(const StationarySolution& sol, const PointValue& v) {
  return -v.d2phi + sol.alpha() * std::norm(v.phi) * v.phi - sol.mu() * v.phi;
}

inline std::vector<double> unit_grid(int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
  return xs;
}

// Breakpoints on [0, 1] at the images of 0 and 1/2 under the shift, where
// the profile has its extrema.
inline std::vector<double> feature_breaks(const StationarySolution& sol) {
  std::vector<double> b{0.0, 1.0};
  for (double f : {sol.shift(), sol.shift() + 0.5}) {
    const double r = f - std::floor(f);
    if (r > 1e-9 && r < 1.0 - 1e-9) b.push_back(r);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

}  // namespace detail

/// max over an equispaced grid of |-phi'' + alpha |phi|^2 phi - mu phi|,
/// with phi'' from the analytic elliptic-derivative formulas.
inline double residual(const StationarySolution& sol, int grid = 256) {
  if (grid < 128) throw DomainError("residual grid must be >= 128");
  double worst = 0.0;
  for (double x : detail::unit_grid(grid)) {
    worst = std::max(worst, std::abs(detail::ode_defect(sol, sol.eval(x))));
  }
  return worst;
}

/// Cross-check of `residual` with phi'' from 5-point central differences
/// (step h) at interior grid points.
inline double residual_fd(const StationarySolution& sol, int grid = 256, double h = 1e-4) {
  if (grid < 128) throw DomainError("residual grid must be >= 128");
  double worst = 0.0;
  for (double x : detail::unit_grid(grid)) {
    if (x < 2.0 * h || x > 1.0 - 2.0 * h) continue;
    const Complex d2 = (-sol.phi(x - 2 * h) + 16.0 * sol.phi(x - h) - 30.0 * sol.phi(x) +
                        16.0 * sol.phi(x + h) - sol.phi(x + 2 * h)) /
                       (12.0 * h * h);
    PointValue v = sol.eval(x);
    v.d2phi = d2;
    worst = std::max(worst, std::abs(detail::ode_defect(sol, v)));
  }
  return worst;
}

struct BoundaryReport {
  double value;       // |phi(1) - e^{ik} phi(0)|
  double derivative;  // |phi'(1) - e^{ik} phi'(0)|
};

inline BoundaryReport check_bc(const StationarySolution& sol) {
  const PointValue v0 = sol.eval(0.0);
  const PointValue v1 = sol.eval(1.0);
  const Complex bloch = std::polar(1.0, sol.k());
  return {std::abs(v1.phi - bloch * v0.phi), std::abs(v1.dphi - bloch * v0.dphi)};
}

/// n equispaced samples on [0, 1], endpoints included.
inline std::vector<SolutionSample> sample(const StationarySolution& sol, int n) {
  if (n < 2) throw DomainError("sample needs n >= 2");
  std::vector<SolutionSample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (double x : detail::unit_grid(n)) {
    const PointValue v = sol.eval(x);
    out.push_back({x, v.rho, v.theta, v.phi.real(), v.phi.imag()});
  }
  return out;
}

struct VerificationReport {
  double normalization = 0.0;   // |int |phi|^2 - 1|
  double theta_end = 0.0;       // |C1 int 1/rho^2 - k| (0 when C1 = 0)
  double bc_value = 0.0;
  double bc_derivative = 0.0;
  double ode_residual = 0.0;    // absolute, analytic derivatives
  double ode_scale = 1.0;       // max(1, |mu|)
  double madelung = 0.0;        // max |Im(conj(phi) phi'_fd) - C1|
  double first_integral = 0.0;  // max |-|phi'|^2/2 + alpha|phi|^4/4 - mu|phi|^2/2 - C2|
  double z_equation = 0.0;      // max |(z')^2 - f(z)|, z = |phi|^2
  double min_rho2 = 0.0;

  bool normalization_ok = false;
  bool theta_end_ok = false;
  bool bc_ok = false;
  bool ode_ok = false;
  bool madelung_ok = false;
  bool first_integral_ok = false;
  bool z_equation_ok = false;
  bool positivity_ok = false;

  bool passed() const {
    return normalization_ok && theta_end_ok && bc_ok && ode_ok && madelung_ok &&
           first_integral_ok && z_equation_ok && positivity_ok;
  }
};

/// Runs every invariant check on `sol` over a grid of `grid` points.
inline VerificationReport verify(const StationarySolution& sol, const Tolerances& tol = {},
                                 int grid = 513) {
  VerificationReport r;
  const auto breaks = detail::feature_breaks(sol);
  r.normalization =
      std::abs(quad_oracle([&](double x) { return std::norm(sol.phi(x)); }, breaks, tol.quad) - 1.0);
  if (sol.C1() != 0.0) {
    // theta(1) = int_0^1 C1 / rho^2.
    const double winding = quad_oracle(
        [&](double x) { return sol.C1() / std::norm(sol.phi(x)); }, breaks, tol.quad);
    r.theta_end = std::abs(winding - sol.k());
  }
  const auto bc = check_bc(sol);
  r.bc_value = bc.value;
  r.bc_derivative = bc.derivative;
  r.ode_scale = std::max(1.0, std::abs(sol.mu()));

  const double alpha = sol.alpha(), mu = sol.mu(), C1 = sol.C1(), C2 = sol.C2();
  const double h = 1e-3;
  r.min_rho2 = std::numeric_limits<double>::infinity();
  for (double x : detail::unit_grid(grid)) {
    const PointValue v = sol.eval(x);
    r.ode_residual = std::max(r.ode_residual, std::abs(detail::ode_defect(sol, v)));
    const double z = std::norm(v.phi);
    r.min_rho2 = std::min(r.min_rho2, z);
    const double energy = -0.5 * std::norm(v.dphi) + 0.25 * alpha * z * z - 0.5 * mu * z;
    r.first_integral = std::max(r.first_integral, std::abs(energy - C2));
    const double dz = 2.0 * (std::conj(v.phi) * v.dphi).real();
    const double fz = 2.0 * alpha * z * z * z - 4.0 * mu * z * z - 8.0 * C2 * z - 4.0 * C1 * C1;
    r.z_equation = std::max(r.z_equation, std::abs(dz * dz - fz));
    if (x >= 3.0 * h && x <= 1.0 - 3.0 * h) {
      // 7-point central difference of the closed-form phi (theta included).
      const Complex dphi = (-sol.phi(x - 3 * h) + 9.0 * sol.phi(x - 2 * h) -
                            45.0 * sol.phi(x - h) + 45.0 * sol.phi(x + h) -
                            9.0 * sol.phi(x + 2 * h) + sol.phi(x + 3 * h)) /
                           (60.0 * h);
      r.madelung = std::max(r.madelung, std::abs((std::conj(v.phi) * dphi).imag() - C1));
    }
  }

  r.normalization_ok = r.normalization <= tol.normalization;
  r.theta_end_ok = r.theta_end <= tol.theta_end;
  r.bc_ok = r.bc_value <= tol.bc && r.bc_derivative <= tol.bc;
  r.ode_ok = r.ode_residual <= tol.ode_residual * r.ode_scale;
  r.madelung_ok = r.madelung <= tol.madelung;
  r.first_integral_ok = r.first_integral <= tol.first_integral;
  r.z_equation_ok = r.z_equation <= tol.z_equation;
  r.positivity_ok = sol.kind() != SolutionKind::Generic || r.min_rho2 > 0.0;
  return r;
}

/// Sup-norm distance on `grid` equispaced points of [0, 1] after removing
/// the global U(1) phase between the two solutions (least-squares phase).
inline double aligned_sup_distance(const StationarySolution& a, const StationarySolution& b,
                                   int grid = 101) {
  const auto xs = detail::unit_grid(grid);
  std::vector<Complex> pa, pb;
  Complex overlap = 0.0;
  for (double x : xs) {
    pa.push_back(a.phi(x));
    pb.push_back(b.phi(x));
    overlap += std::conj(pa.back()) * pb.back();
  }
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    worst = std::max(worst, std::abs(phase * pa[i] - pb[i]));
  }
  return worst;
}

}  // namespace nlsband
