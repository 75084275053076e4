// nlsband_cli: band edges, dispersion sweeps, solution samples and batch
// verification as CSV or JSON.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nlsband/cli.hpp"

namespace cli = nlsband::cli;

int main(int argc, char** argv) {
  CLI::App app{"Stationary solutions of the cubic NLS on [0,1] with quasi-periodic boundary conditions"};
  app.require_subcommand(1);

  cli::RunConfig cfg;
  std::string format = "csv";
  std::string out_path;
  std::vector<std::string> tol_specs;
  double mu = 0.0, k = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--tol", tol_specs, "override a tolerance, NAME=VALUE (repeatable)");
  };

  auto* edges = app.add_subcommand("edges", "band edges for one alpha");
  edges->add_option("--alpha", cfg.alpha)->required();
  add_common(edges);

  auto* sweep = app.add_subcommand("alpha-sweep", "band edges on an alpha grid");
  sweep->add_option("--min", cfg.alpha_min)->required();
  sweep->add_option("--max", cfg.alpha_max)->required();
  sweep->add_option("--n", cfg.n_points)->required();
  add_common(sweep);

  auto* band = app.add_subcommand("band", "dispersion curve samples (t, mu, k)");
  band->add_option("--alpha", cfg.alpha)->required();
  band->add_option("--n", cfg.n_points)->required();
  add_common(band);

  auto* solve = app.add_subcommand("solve", "sample the solution at one mu or k");
  solve->add_option("--alpha", cfg.alpha)->required();
  auto* mu_opt = solve->add_option("--mu", mu);
  auto* k_opt = solve->add_option("--k", k);
  mu_opt->excludes(k_opt);
  solve->add_option("--n", cfg.n_points)->required();
  add_common(solve);

  auto* verify = app.add_subcommand("verify", "invariant suite over the band");
  verify->add_option("--alpha", cfg.alpha)->required();
  verify->add_option("--n-mu", cfg.n_points)->required();
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::exit_code::kUsage;
  }

  if (*edges) cfg.command = cli::Command::Edges;
  if (*sweep) cfg.command = cli::Command::AlphaSweep;
  if (*band) cfg.command = cli::Command::Band;
  if (*solve) cfg.command = cli::Command::Solve;
  if (*verify) cfg.command = cli::Command::Verify;
  if (*mu_opt) cfg.mu = mu;
  if (*k_opt) cfg.k = k;
  cfg.format = format == "json" ? cli::Format::Json : cli::Format::Csv;

  try {
    for (const auto& spec : tol_specs) {
      const auto [name, value] = cli::parse_tolerance(spec);
      cfg.tol_overrides[name] = value;
    }
    cfg.tolerances();
  } catch (const nlsband::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code::kUsage;
  }

  if (out_path.empty()) return cli::run(cfg, std::cout, std::cerr);
  cfg.output_path = out_path;
  std::ofstream file(out_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot open " << out_path << '\n';
    return cli::exit_code::kUsage;
  }
  return cli::run(cfg, file, std::cerr);
}
