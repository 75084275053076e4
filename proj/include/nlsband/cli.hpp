#pragma once

// Command layer behind tools/nlsband_cli: each command turns a RunConfig
// into an Emission (meta record + table), which is written as CSV or JSON.
// Output is deterministic: fixed column order, %.17g numbers, no timestamps.

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlsband/band.hpp"
#include "nlsband/errors.hpp"
#include "nlsband/solution.hpp"
#include "nlsband/tolerances.hpp"

namespace nlsband::cli {

enum class Command { Edges, Band, Solve, Verify, AlphaSweep };
enum class Format { Csv, Json };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::Edges: return "edges";
    case Command::Band: return "band";
    case Command::Solve: return "solve";
    case Command::Verify: return "verify";
    case Command::AlphaSweep: return "alpha-sweep";
  }
  return "?";
}

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kChecksFailed = 1;  // verify/solve ran but an invariant check failed
inline constexpr int kUsage = 2;
inline constexpr int kOutOfBand = 3;
inline constexpr int kNumerical = 4;
}  // namespace exit_code

struct RunConfig {
  Command command = Command::Edges;
  double alpha = 0.0;
  double alpha_min = 0.0;  // alpha-sweep only
  double alpha_max = 0.0;
  std::optional<double> mu;
  std::optional<double> k;
  int n_points = 100;  // band/solve rows, alpha-sweep rows, verify samples
  Format format = Format::Csv;
  std::optional<std::string> output_path;
  std::map<std::string, double> tol_overrides;

  Tolerances tolerances() const {
    Tolerances tol;
    for (const auto& [name, value] : tol_overrides) tol.set(name, value);
    return tol;
  }

  void validate() const {
    if (n_points < 2) throw DomainError("n must be >= 2");
    const bool has_mu = mu.has_value(), has_k = k.has_value();
    if (command == Command::Solve && has_mu == has_k) {
      throw DomainError("solve needs exactly one of --mu or --k");
    }
    if (command != Command::Solve && (has_mu || has_k)) {
      throw DomainError(std::string(to_string(command)) + " takes neither --mu nor --k");
    }
    if (command == Command::AlphaSweep && !(alpha_min < alpha_max)) {
      throw DomainError("alpha-sweep needs min < max");
    }
  }
};

/// Parses "NAME=VALUE"; "residual" is accepted for ode_residual.
inline std::pair<std::string, double> parse_tolerance(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw DomainError("tolerance override must look like NAME=VALUE: " + spec);
  }
  std::string name = spec.substr(0, eq);
  if (name == "residual") name = "ode_residual";
  const std::string text = spec.substr(eq + 1);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw DomainError("bad tolerance value: " + spec);
  Tolerances{}.field(name);  // rejects unknown names early
  return {name, value};
}

// ---------------------------------------------------------------------------
// Emission.

/// Empty cell, number, text, or flag.
using Cell = std::variant<std::monostate, double, std::string, bool>;
using Json = nlohmann::ordered_json;

struct Emission {
  Json meta = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  int exit_code = exit_code::kSuccess;
};

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_cell(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
  if (std::holds_alternative<bool>(c)) return std::get<bool>(c) ? "true" : "false";
  if (std::holds_alternative<std::string>(c)) {
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  return "";
}

inline Json json_cell(const Cell& c) {
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    return std::isfinite(v) ? Json(v) : Json(nullptr);
  }
  if (std::holds_alternative<bool>(c)) return std::get<bool>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

inline void write_csv(const Emission& e, std::ostream& out) {
  for (std::size_t i = 0; i < e.columns.size(); ++i) out << (i ? "," : "") << e.columns[i];
  out << '\n';
  for (const auto& row : e.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

inline void write_json(const Emission& e, std::ostream& out) {
  Json doc = Json::object();
  doc["meta"] = e.meta;
  Json rows = Json::array();
  for (const auto& row : e.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < e.columns.size(); ++i) obj[e.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

/// Meta as "# key: value" lines, for the CSV side channel (stderr).
inline void write_meta_comments(const Emission& e, std::ostream& err) {
  for (const auto& [key, value] : e.meta.items()) err << "# " << key << ": " << value.dump() << '\n';
}

// ---------------------------------------------------------------------------
// Commands.

namespace detail {

inline Json tolerance_meta(const Tolerances& tol) {
  Json j = Json::object();
  Tolerances copy = tol;
  for (auto name : Tolerances::kNames) j[std::string(name)] = copy.field(name);
  return j;
}

inline Json params_json(const SolutionParams& p) {
  return Json{{"t", p.t.value()}, {"q", p.q},   {"A", p.A},   {"B", p.B},
              {"C1", p.C1},       {"C2", p.C2}, {"mu", p.mu}, {"k", p.k},
              {"alpha", p.alpha}, {"ell", p.ell}};
}

inline Json report_json(const VerificationReport& r) {
  return Json{{"normalization", r.normalization},
              {"theta_end", r.theta_end},
              {"bc_value", r.bc_value},
              {"bc_derivative", r.bc_derivative},
              {"ode_residual", r.ode_residual},
              {"ode_scale", r.ode_scale},
              {"madelung", r.madelung},
              {"first_integral", r.first_integral},
              {"z_equation", r.z_equation},
              {"min_rho2", r.min_rho2},
              {"passed", r.passed()}};
}

inline std::vector<Cell> edge_row(const BandEdges& e) {
  return {e.alpha,      std::string(to_string(e.regime)), e.t_m.value(), e.t_M.value(),
          e.mu_m,       e.mu_M,                           e.k_m,         e.k_M,
          e.k_m_at_edge, e.k_M_at_edge};
}

inline const std::vector<std::string> kEdgeColumns = {
    "alpha", "regime", "t_m", "t_M", "mu_m", "mu_M", "k_m", "k_M", "k_m_infimum", "k_M_supremum"};

inline const std::vector<std::string> kParamColumns = {"alpha", "regime", "t",  "mu",
                                                       "k",     "A",      "B",  "C1", "C2"};

inline std::vector<Cell> param_cells(const SolutionParams& p) {
  return {p.alpha, std::string(to_string(Nonlinearity(p.alpha).regime)),
          p.t.value(), p.mu, p.k, p.A, p.B, p.C1, p.C2};
}

}  // namespace detail

/// One band-edge record. k_m_infimum / k_M_supremum flag values that are
/// limits at an open edge rather than attained inside the band.
inline Emission cmd_edges(double alpha, const Tolerances& tol = {}) {
  Emission e;
  e.meta = Json{{"command", "edges"}, {"alpha", alpha}, {"tolerances", detail::tolerance_meta(tol)}};
  e.columns = detail::kEdgeColumns;
  e.rows.push_back(detail::edge_row(solve_band_edges(alpha, tol)));
  return e;
}

/// n edge records on an equispaced alpha grid. alpha = 0 gives a sentinel
/// row: the band collapses to mu = pi^2 with k = pi.
inline Emission cmd_alpha_sweep(double alpha_min, double alpha_max, int n,
                                const Tolerances& tol = {}) {
  if (!(alpha_min < alpha_max)) throw DomainError("alpha-sweep needs min < max");
  if (n < 2) throw DomainError("alpha-sweep needs n >= 2");
  Emission e;
  e.meta = Json{{"command", "alpha-sweep"},
                {"alpha_min", alpha_min},
                {"alpha_max", alpha_max},
                {"n", n},
                {"tolerances", detail::tolerance_meta(tol)}};
  e.columns = detail::kEdgeColumns;
  const double step = (alpha_max - alpha_min) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double alpha = i == n - 1 ? alpha_max : alpha_min + i * step;
    if (alpha == 0.0) {
      const double pi = std::numbers::pi;
      e.rows.push_back({0.0, std::string("none"), 0.0, 0.0, pi * pi, pi * pi, pi, pi, true, true});
      continue;
    }
    e.rows.push_back(detail::edge_row(solve_band_edges(alpha, tol)));
  }
  return e;
}

/// Dispersion-curve rows {t, mu, k, A, B, C1, C2}, increasing t.
inline Emission cmd_band(double alpha, int n, const Tolerances& tol = {}) {
  const auto curve = sweep_band(alpha, n, tol);
  const auto edges = solve_band_edges(alpha, tol);
  Emission e;
  e.meta = Json{{"command", "band"},
                {"alpha", alpha},
                {"n", n},
                {"regime", to_string(edges.regime)},
                {"mu_m", edges.mu_m},
                {"mu_M", edges.mu_M},
                {"k_m", edges.k_m},
                {"k_M", edges.k_M},
                {"tolerances", detail::tolerance_meta(tol)}};
  e.columns = detail::kParamColumns;
  for (const auto& p : curve.rows) {
    // Re-validate each row against the constraint block.
    if (!(p.B > 0.0 && p.a_plus_b > 0.0 && p.C1 > 0.0)) {
      throw NumericalFailure("band row violates the constraint block");
    }
    e.rows.push_back(detail::param_cells(p));
  }
  return e;
}

/// Samples the solution(s) at the requested mu, or at every band energy
/// whose quasimomentum is k. Each row repeats the parameter columns so
/// several branches can share one table.
inline Emission cmd_solve(double alpha, std::optional<double> mu, std::optional<double> k, int n,
                          const Tolerances& tol = {}) {
  if (mu.has_value() == k.has_value()) throw DomainError("solve needs exactly one of mu or k");
  if (n < 2) throw DomainError("solve needs n >= 2");
  const auto w = energy_window(alpha, tol);
  std::vector<double> mus = mu ? std::vector<double>{*mu} : mu_of_k(*k, alpha, 64, tol);

  Emission e;
  e.meta = Json{{"command", "solve"}, {"alpha", alpha}};
  if (mu) e.meta["mu"] = *mu;
  if (k) e.meta["k"] = *k;
  e.meta["n"] = n;
  e.meta["mu_m"] = w.mu_m;
  e.meta["mu_M"] = w.mu_M;
  e.meta["tolerances"] = detail::tolerance_meta(tol);
  e.columns = detail::kParamColumns;
  for (const char* c : {"x", "rho", "theta", "re_phi", "im_phi"}) e.columns.emplace_back(c);

  Json branches = Json::array();
  for (double m : mus) {
    const auto sol = build(params_from_t(t_of_mu(m, w, tol), alpha));
    const auto report = verify(sol, tol);
    branches.push_back(Json{{"params", detail::params_json(sol.params())},
                            {"report", detail::report_json(report)}});
    if (!report.passed()) e.exit_code = exit_code::kChecksFailed;
    const auto base = detail::param_cells(sol.params());
    for (const auto& s : sample(sol, n)) {
      auto row = base;
      for (double v : {s.x, s.rho, s.theta, s.re_phi, s.im_phi}) row.emplace_back(v);
      e.rows.push_back(std::move(row));
    }
  }
  e.meta["branches"] = std::move(branches);
  return e;
}

/// Runs the invariant suite at n_mu equispaced energies strictly inside the
/// band. exit_code is kChecksFailed when any check fails.
inline Emission cmd_verify(double alpha, int n_mu, const Tolerances& tol = {}) {
  if (n_mu < 1) throw DomainError("verify needs n_mu >= 1");
  const auto w = energy_window(alpha, tol);
  Emission e;
  e.columns = {"alpha",     "regime",         "t",          "mu",       "k",
               "normalization", "theta_end",  "bc_value",   "bc_derivative",
               "ode_residual_scaled", "madelung", "first_integral", "z_equation",
               "min_rho2",  "pass"};
  // Worst value of each check relative to its threshold (<= 1 passes).
  double worst_norm = 0, worst_theta = 0, worst_bc = 0, worst_ode = 0, worst_mad = 0,
         worst_fi = 0, worst_z = 0;
  int failures = 0;
  const std::string regime = to_string(w.nl.regime);
  for (int i = 0; i < n_mu; ++i) {
    const double mu = w.mu_m + (w.mu_M - w.mu_m) * (i + 1) / (n_mu + 1);
    const auto sol = build(params_from_t(t_of_mu(mu, w, tol), alpha));
    const auto r = verify(sol, tol);
    const double ode_scaled = r.ode_residual / r.ode_scale;
    worst_norm = std::max(worst_norm, r.normalization / tol.normalization);
    worst_theta = std::max(worst_theta, r.theta_end / tol.theta_end);
    worst_bc = std::max(worst_bc, std::max(r.bc_value, r.bc_derivative) / tol.bc);
    worst_ode = std::max(worst_ode, ode_scaled / tol.ode_residual);
    worst_mad = std::max(worst_mad, r.madelung / tol.madelung);
    worst_fi = std::max(worst_fi, r.first_integral / tol.first_integral);
    worst_z = std::max(worst_z, r.z_equation / tol.z_equation);
    if (!r.passed()) ++failures;
    e.rows.push_back({alpha, regime, sol.params().t.value(), mu, sol.k(), r.normalization,
                      r.theta_end, r.bc_value, r.bc_derivative, ode_scaled, r.madelung,
                      r.first_integral, r.z_equation, r.min_rho2, r.passed()});
  }
  e.meta = Json{{"command", "verify"},
                {"alpha", alpha},
                {"n_mu", n_mu},
                {"mu_m", w.mu_m},
                {"mu_M", w.mu_M},
                {"failures", failures},
                {"all_pass", failures == 0},
                {"worst_margin",
                 Json{{"normalization", worst_norm},
                      {"theta_end", worst_theta},
                      {"bc", worst_bc},
                      {"ode_residual", worst_ode},
                      {"madelung", worst_mad},
                      {"first_integral", worst_fi},
                      {"z_equation", worst_z}}},
                {"tolerances", detail::tolerance_meta(tol)}};
  if (failures > 0) e.exit_code = exit_code::kChecksFailed;
  return e;
}

inline Emission dispatch(const RunConfig& cfg) {
  cfg.validate();
  const Tolerances tol = cfg.tolerances();
  switch (cfg.command) {
    case Command::Edges: return cmd_edges(cfg.alpha, tol);
    case Command::AlphaSweep: return cmd_alpha_sweep(cfg.alpha_min, cfg.alpha_max, cfg.n_points, tol);
    case Command::Band: return cmd_band(cfg.alpha, cfg.n_points, tol);
    case Command::Solve: return cmd_solve(cfg.alpha, cfg.mu, cfg.k, cfg.n_points, tol);
    case Command::Verify: return cmd_verify(cfg.alpha, cfg.n_points, tol);
  }
  throw DomainError("unknown command");
}

/// Runs one command, writes the emission to `out` (meta to `err` in CSV
/// mode) and maps errors to exit codes.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Emission e = dispatch(cfg);
    if (cfg.format == Format::Json) {
      write_json(e, out);
    } else {
      write_csv(e, out);
      write_meta_comments(e, err);
    }
    return e.exit_code;
  } catch (const OutOfBandError& ex) {
    err << "error: " << ex.what() << " [" << format_number(ex.lower()) << ", "
        << format_number(ex.upper()) << "]\n";
    return exit_code::kOutOfBand;
  } catch (const DomainError& ex) {
    err << "error: " << ex.what() << '\n';
    return exit_code::kUsage;
  } catch (const NotImplementedError& ex) {
    err << "error: " << ex.what() << '\n';
    return exit_code::kUsage;
  } catch (const std::exception& ex) {
    err << "numerical failure: " << ex.what() << '\n';
    return exit_code::kNumerical;
  }
}

}  // namespace nlsband::cli
