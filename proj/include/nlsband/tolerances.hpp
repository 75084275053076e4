#pragma once

#include <array>
#include <string>
#include <string_view>

#include "nlsband/errors.hpp"

namespace nlsband {

/// Named numerical constants. Every field can be overridden by name, which
/// is how the CLI's `--tol NAME=VALUE` reaches them.
struct Tolerances {
  // Root finding and grids.
  double root_t = 1e-13;         // max bracket width in t for edge roots
  double root_residual = 1e-8;   // edge-root residual, scaled by max(1, |alpha|)
  double mu_match = 1e-9;        // |G(t) - (mu - 1.5 alpha)|, scaled by max(1, |mu|)
  double k_match = 1e-9;         // |k(t) - k| accepted by mu_of_k
  double grid_levels = 12;       // geometric refinement levels at each band edge
  double grid_factor = 2;        // ratio between consecutive refinement offsets
  // Verification thresholds.
  double quad = 1e-11;           // absolute tolerance of verification integrals
  double normalization = 1e-9;   // |int rho^2 - 1|
  double theta_end = 1e-9;       // |theta(1) - k|
  double bc = 1e-8;              // quasi-periodic boundary residuals
  double ode_residual = 1e-6;    // ODE residual, relative to max(1, |mu|)
  double madelung = 1e-8;        // drift of rho^2 theta'
  double first_integral = 1e-8;  // drift of the first integral around C2
  double z_equation = 1e-7;      // (z')^2 - f(z) on the grid

  static constexpr std::array<std::string_view, 14> kNames = {
      "root_t",        "root_residual", "mu_match",  "k_match",      "grid_levels",
      "grid_factor",   "quad",          "normalization", "theta_end", "bc",
      "ode_residual",  "madelung",      "first_integral", "z_equation"};

  double& field(std::string_view name) {
    if (name == "root_t") return root_t;
    if (name == "root_residual") return root_residual;
    if (name == "mu_match") return mu_match;
    if (name == "k_match") return k_match;
    if (name == "grid_levels") return grid_levels;
    if (name == "grid_factor") return grid_factor;
    if (name == "quad") return quad;
    if (name == "normalization") return normalization;
    if (name == "theta_end") return theta_end;
    if (name == "bc") return bc;
    if (name == "ode_residual") return ode_residual;
    if (name == "madelung") return madelung;
    if (name == "first_integral") return first_integral;
    if (name == "z_equation") return z_equation;
    throw DomainError("unknown tolerance name: " + std::string(name));
  }

  void set(std::string_view name, double value) {
    if (!(value > 0.0)) {
      throw DomainError("tolerance " + std::string(name) + " must be positive");
    }
    if ((name == "grid_factor" && value <= 1.0) || (name == "grid_levels" && value > 60.0)) {
      throw DomainError("tolerance " + std::string(name) + " out of range");
    }
    field(name) = value;
  }
};

}  // namespace nlsband
