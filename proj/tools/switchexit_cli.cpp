// Command-line front end: validate, simulate, sweep, limits, limit-table,
// martingale. Exit codes: 0 success, 1 validation failure, 2 runtime error.

#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>

#include "switchexit/error.hpp"
#include "switchexit/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kRuntimeError = 2;

switchexit::ExperimentConfig load(const std::string& path) {
  auto config = switchexit::load_config(path);
  switchexit::apply_environment(config);
  return config;
}

int cmd_validate(const std::string& path) {
  const auto config = load(path);
  const auto report =
      switchexit::validate_model(config.f_plus_text(), config.f_minus_text(), config.R);
  std::cout << report.to_text();
  return report.ok() ? kOk : kValidationFailure;
}

int cmd_simulate(const std::string& path, double mu) {
  const auto config = load(path);
  switchexit::run_simulate(config, mu, &std::cerr);
  return kOk;
}

int cmd_sweep(const std::string& path) {
  const auto config = load(path);
  switchexit::run_sweep(config, &std::cerr);
  return kOk;
}

int cmd_limits(const std::string& path) {
  const auto config = load(path);
  const auto model = switchexit::build_model(config);
  switchexit::write_limits_csv(std::cout, config, model);
  return kOk;
}

int cmd_limit_table(const std::string& path, double tmin, double tmax, std::size_t steps) {
  const auto config = load(path);
  const auto model = switchexit::build_model(config);
  const auto law = switchexit::make_limit_law(model, config.r, config.quad_tol);
  switchexit::write_limit_table_csv(std::cout, law, tmin, tmax, steps);
  return kOk;
}

int cmd_martingale(const std::string& path, double mu, double T) {
  const auto config = load(path);
  const auto model = switchexit::build_model(config);
  const auto report = switchexit::martingale_probe(model, mu, T, config.n, config.master_seed,
                                                   config.sigma0, config.ode_tol, config.workers);
  std::cout << switchexit::martingale_json(report, mu, config.sigma0) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exit of a randomly switched system from an unstable equilibrium"};
  app.require_subcommand(1);

  std::string config_path;
  double mu = 0.0;
  double horizon = 0.0;
  double tmin = -5.0;
  double tmax = 10.0;
  std::size_t steps = 301;

  auto* validate = app.add_subcommand("validate", "Build the model and print the validation report");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  auto* simulate = app.add_subcommand("simulate", "Simulate one ensemble at a single rate");
  simulate->add_option("config", config_path, "Experiment config (JSON)")->required();
  simulate->add_option("--mu", mu, "Switching rate")->required();

  auto* sweep = app.add_subcommand("sweep", "Simulate every rate in mu_list; writes summary.csv");
  sweep->add_option("config", config_path, "Experiment config (JSON)")->required();

  auto* limits = app.add_subcommand("limits", "Print r, K(r), D(r), D(-r) as CSV");
  limits->add_option("config", config_path, "Experiment config (JSON)")->required();

  auto* table = app.add_subcommand("limit-table", "Print limit-law CDFs on a t grid as CSV");
  table->add_option("config", config_path, "Experiment config (JSON)")->required();
  table->add_option("--tmin", tmin, "Left end of the grid");
  table->add_option("--tmax", tmax, "Right end of the grid");
  table->add_option("--steps", steps, "Number of grid points");

  auto* mart = app.add_subcommand("martingale", "Martingale diagnostics as JSON");
  mart->add_option("config", config_path, "Experiment config (JSON)")->required();
  mart->add_option("--mu", mu, "Switching rate")->required();
  mart->add_option("--T", horizon, "Time horizon")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidationFailure;
  }

  try {
    if (*validate) return cmd_validate(config_path);
    if (*simulate) return cmd_simulate(config_path, mu);
    if (*sweep) return cmd_sweep(config_path);
    if (*limits) return cmd_limits(config_path);
    if (*table) return cmd_limit_table(config_path, tmin, tmax, steps);
    if (*mart) return cmd_martingale(config_path, mu, horizon);
  } catch (const switchexit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const switchexit::AssumptionError& e) {
    std::cerr << e.what() << '\n';
    return kValidationFailure;
  } catch (const switchexit::ParseError& e) {
    std::cerr << "expression " << e.what() << '\n';
    return kValidationFailure;
  } catch (const switchexit::NotDifferentiableError& e) {
    std::cerr << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kRuntimeError;
}
