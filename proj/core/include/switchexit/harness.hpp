#pragma once

// Experiment configuration, orchestration and CSV output.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "switchexit/limitlaw.hpp"
#include "switchexit/model.hpp"
#include "switchexit/pdmp.hpp"

namespace switchexit {

struct ExperimentConfig {
  std::string f_plus;
  std::string f_minus;
  double R = 0.0;
  double r = 0.0;
  double gamma = kDefaultGamma;
  std::vector<double> mu_list;
  std::size_t n = 1000;
  std::uint64_t master_seed = 0;
  unsigned workers = 1;
  InitialSign sigma0 = InitialSign::kUniform;
  double ode_tol = kDefaultOdeTol;
  double quad_tol = kDefaultQuadTol;
  std::filesystem::path output_dir = ".";
  // Substituted for "{name}" in f_plus / f_minus before parsing.
  std::map<std::string, double> parameters;

  // Field expressions after parameter substitution.
  std::string f_plus_text() const;
  std::string f_minus_text() const;

  PathParams path_params(double mu) const;

  // FNV-1a over the canonical JSON of every field that affects results
  // (workers and output_dir excluded).
  std::uint64_t hash() const;
};

// Parses a JSON document; unknown keys and invalid values raise ConfigError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Applies PDMP_WORKERS, when set, over the workers field.
void apply_environment(ExperimentConfig& config);

// Throws ConfigError naming the field and the reason.
void validate_config(const ExperimentConfig& config);

struct SweepSummaryRow {
  double mu = 0.0;
  std::size_t n = 0;
  double frac_plus = 0.0;
  std::optional<double> ks_tau_plus;
  std::optional<double> ks_tau_minus;
  std::optional<double> ks_theta;
  double mean_switches = 0.0;
  double wall_seconds = 0.0;  // reported on the log stream, never in CSV
};

struct SingleRun {
  Ensemble ensemble;
  SweepSummaryRow summary;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

ModelPair build_model(const ExperimentConfig& config);

// Simulates one ensemble at rate mu and scores it against the limit law.
SingleRun run_single(const ExperimentConfig& config, const ModelPair& model, double mu);
SweepSummaryRow summarize(const Ensemble& ens, const LimitLaw& law, double wall_seconds);

std::string trajectory_csv_header();
void write_trajectory_csv(std::ostream& os, const Ensemble& ens);

std::string summary_csv_header();
void write_summary_row(std::ostream& os, const SweepSummaryRow& row, const ExperimentConfig& config);

std::filesystem::path trajectory_csv_path(const ExperimentConfig& config, double mu);

// One row per mu in ascending order; writes traj_mu<mu>.csv for every mu
// and summary.csv into output_dir. Progress goes to `log` when non-null.
std::vector<SweepSummaryRow> run_sweep(const ExperimentConfig& config, std::ostream* log = nullptr);

// run_single plus file output: writes traj_mu<mu>.csv and appends one row to
// summary.csv (creating it with a header if needed).
SweepSummaryRow run_simulate(const ExperimentConfig& config, double mu, std::ostream* log = nullptr);

// r,K,D_plus,D_minus
void write_limits_csv(std::ostream& os, const ExperimentConfig& config, const ModelPair& model);

// t,cdf_plus,cdf_minus,theta_cdf on `steps` equispaced points of [tmin, tmax].
void write_limit_table_csv(std::ostream& os, const LimitLaw& law, double tmin, double tmax,
                           std::size_t steps);

std::string martingale_json(const MartingaleReport& report, double mu, InitialSign sigma0);

}  // namespace switchexit
