#include "switchexit/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <thread>

#include "switchexit/error.hpp"
#include "switchexit/stats.hpp"

namespace switchexit {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 14> kConfigKeys{
    "f_plus", "f_minus", "R",       "r",      "gamma",   "mu_list",    "n",
    "master_seed", "workers", "sigma0_law", "ode_tol", "quad_tol", "output_dir", "parameters"};

double get_number(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

std::uint64_t get_unsigned(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(key, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& doc, const char* key) {
  const auto& v = doc.at(key);
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

std::string_view sigma0_name(InitialSign s) {
  switch (s) {
    case InitialSign::kPlus: return "plus";
    case InitialSign::kMinus: return "minus";
    case InitialSign::kUniform: break;
  }
  return "uniform";
}

std::string substitute(std::string text, const std::map<std::string, double>& parameters) {
  for (const auto& [name, value] : parameters) {
    const std::string token = "{" + name + "}";
    std::string replacement = format_double(value);
    if (value < 0.0 || std::signbit(value)) replacement = "(" + replacement + ")";
    for (std::size_t pos = text.find(token); pos != std::string::npos;
         pos = text.find(token, pos + replacement.size())) {
      text.replace(pos, token.size(), replacement);
    }
  }
  return text;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, mode | std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

void write_optional(std::ostream& os, const std::optional<double>& v) {
  if (v) os << format_double(*v);
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string ExperimentConfig::f_plus_text() const { return substitute(f_plus, parameters); }
std::string ExperimentConfig::f_minus_text() const { return substitute(f_minus, parameters); }

PathParams ExperimentConfig::path_params(double mu) const {
  PathParams p;
  p.mu = mu;
  p.r = r;
  p.gamma = gamma;
  p.ode_tol = ode_tol;
  p.sigma0 = sigma0;
  return p;
}

std::uint64_t ExperimentConfig::hash() const {
  json doc;
  doc["f_plus"] = f_plus_text();
  doc["f_minus"] = f_minus_text();
  doc["R"] = R;
  doc["r"] = r;
  doc["gamma"] = gamma;
  doc["mu_list"] = mu_list;
  doc["n"] = n;
  doc["master_seed"] = master_seed;
  doc["sigma0_law"] = sigma0_name(sigma0);
  doc["ode_tol"] = ode_tol;
  doc["quad_tol"] = quad_tol;
  const std::string canonical = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!doc.is_object()) throw ConfigError("<document>", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
      throw ConfigError(key, "unknown key");
    }
  }
  for (const char* key : {"f_plus", "f_minus", "R", "r", "mu_list"}) {
    if (!doc.contains(key)) throw ConfigError(key, "missing required key");
  }

  ExperimentConfig c;
  c.workers = std::max(1u, std::thread::hardware_concurrency());
  c.f_plus = get_string(doc, "f_plus");
  c.f_minus = get_string(doc, "f_minus");
  c.R = get_number(doc, "R");
  c.r = get_number(doc, "r");
  if (doc.contains("gamma")) c.gamma = get_number(doc, "gamma");

  const auto& mus = doc.at("mu_list");
  if (!mus.is_array()) throw ConfigError("mu_list", "expected an array of numbers");
  for (const auto& m : mus) {
    if (!m.is_number()) throw ConfigError("mu_list", "expected an array of numbers");
    c.mu_list.push_back(m.get<double>());
  }

  if (doc.contains("n")) c.n = get_unsigned(doc, "n");
  if (doc.contains("master_seed")) c.master_seed = get_unsigned(doc, "master_seed");
  if (doc.contains("workers")) c.workers = static_cast<unsigned>(get_unsigned(doc, "workers"));
  if (doc.contains("sigma0_law")) {
    const std::string law = get_string(doc, "sigma0_law");
    if (law == "plus") {
      c.sigma0 = InitialSign::kPlus;
    } else if (law == "minus") {
      c.sigma0 = InitialSign::kMinus;
    } else if (law == "uniform") {
      c.sigma0 = InitialSign::kUniform;
    } else {
      throw ConfigError("sigma0_law", "expected one of plus, minus, uniform");
    }
  }
  if (doc.contains("ode_tol")) c.ode_tol = get_number(doc, "ode_tol");
  if (doc.contains("quad_tol")) c.quad_tol = get_number(doc, "quad_tol");
  if (doc.contains("output_dir")) c.output_dir = get_string(doc, "output_dir");
  if (doc.contains("parameters")) {
    const auto& params = doc.at("parameters");
    if (!params.is_object()) throw ConfigError("parameters", "expected an object of numbers");
    for (const auto& [name, value] : params.items()) {
      if (!value.is_number()) throw ConfigError("parameters." + name, "expected a number");
      c.parameters[name] = value.get<double>();
    }
  }

  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(path.string(), "cannot open config file");
  std::ostringstream text;
  text << is.rdbuf();
  return parse_config(text.str());
}

void apply_environment(ExperimentConfig& config) {
  const char* env = std::getenv("PDMP_WORKERS");
  if (env == nullptr || *env == '\0') return;
  unsigned value = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value == 0) {
    throw ConfigError("PDMP_WORKERS", "expected a positive integer");
  }
  config.workers = value;
}

void validate_config(const ExperimentConfig& c) {
  if (c.f_plus.empty()) throw ConfigError("f_plus", "empty expression");
  if (c.f_minus.empty()) throw ConfigError("f_minus", "empty expression");
  if (!(c.R > 0.0) || !std::isfinite(c.R)) throw ConfigError("R", "must be positive");
  if (!(c.r > 0.0) || !(c.r <= c.R)) throw ConfigError("r", "must satisfy 0 < r <= R");
  if (!(c.gamma > 0.25 && c.gamma < 0.5)) throw ConfigError("gamma", "gamma outside (1/4,1/2)");
  if (c.mu_list.empty()) throw ConfigError("mu_list", "must be non-empty");
  for (std::size_t i = 0; i < c.mu_list.size(); ++i) {
    const double mu = c.mu_list[i];
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("mu_list", "values must be positive");
    if (i > 0 && mu == c.mu_list[i - 1]) throw ConfigError("mu_list", "duplicate value");
    if (i > 0 && mu < c.mu_list[i - 1]) throw ConfigError("mu_list", "must be sorted ascending");
  }
  if (c.n < 1) throw ConfigError("n", "must be >= 1");
  if (c.workers < 1) throw ConfigError("workers", "must be >= 1");
  if (!(c.ode_tol > 0.0)) throw ConfigError("ode_tol", "must be positive");
  if (!(c.quad_tol > 0.0)) throw ConfigError("quad_tol", "must be positive");
}

ModelPair build_model(const ExperimentConfig& config) {
  return build_model(config.f_plus_text(), config.f_minus_text(), config.R);
}

SweepSummaryRow summarize(const Ensemble& ens, const LimitLaw& law, double wall_seconds) {
  SweepSummaryRow row;
  row.mu = ens.mu;
  row.n = ens.records.size();
  row.wall_seconds = wall_seconds;

  std::vector<double> plus;
  std::vector<double> minus;
  std::vector<double> theta;
  double switches = 0.0;
  for (const auto& rec : ens.records) {
    (rec.side > 0 ? plus : minus).push_back(rec.centered_tau);
    if (rec.centered_theta) theta.push_back(*rec.centered_theta);
    switches += static_cast<double>(rec.n_switches);
  }
  row.frac_plus = static_cast<double>(plus.size()) / static_cast<double>(row.n);
  row.mean_switches = switches / static_cast<double>(row.n);

  if (!plus.empty()) {
    row.ks_tau_plus = stats::ks_statistic(stats::ecdf(plus),
                                          [&law](double t) { return limit_cdf(law, 1, t); });
  }
  if (!minus.empty()) {
    row.ks_tau_minus = stats::ks_statistic(stats::ecdf(minus),
                                           [&law](double t) { return limit_cdf(law, -1, t); });
  }
  if (!theta.empty()) {
    row.ks_theta = stats::ks_statistic(stats::ecdf(theta),
                                       [&law](double t) { return theta_limit_cdf(law, t); });
  }
  return row;
}

SingleRun run_single(const ExperimentConfig& config, const ModelPair& model, double mu) {
  validate_config(config);
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("mu", "must be positive");
  const LimitLaw law = make_limit_law(model, config.r, config.quad_tol);

  const auto start = std::chrono::steady_clock::now();
  Ensemble ens =
      run_ensemble(model, config.path_params(mu), config.n, config.master_seed, config.workers);
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

  SingleRun out;
  out.summary = summarize(ens, law, wall.count());
  out.ensemble = std::move(ens);
  return out;
}

std::string trajectory_csv_header() {
  return "traj_index,side,tau,centered_tau,theta,centered_theta,n_switches";
}

void write_trajectory_csv(std::ostream& os, const Ensemble& ens) {
  os << trajectory_csv_header() << '\n';
  for (const auto& rec : ens.records) {
    os << rec.traj_index << ',' << rec.side << ',' << format_double(rec.tau) << ','
       << format_double(rec.centered_tau) << ',';
    write_optional(os, rec.theta);
    os << ',';
    write_optional(os, rec.centered_theta);
    os << ',' << rec.n_switches << '\n';
  }
}

std::string summary_csv_header() {
  return "mu,n,frac_plus,ks_tau_plus,ks_tau_minus,ks_theta,mean_switches,config_hash,master_seed";
}

void write_summary_row(std::ostream& os, const SweepSummaryRow& row,
                       const ExperimentConfig& config) {
  os << format_double(row.mu) << ',' << row.n << ',' << format_double(row.frac_plus) << ',';
  write_optional(os, row.ks_tau_plus);
  os << ',';
  write_optional(os, row.ks_tau_minus);
  os << ',';
  write_optional(os, row.ks_theta);
  os << ',' << format_double(row.mean_switches) << ',' << hex64(config.hash()) << ','
     << config.master_seed << '\n';
}

std::filesystem::path trajectory_csv_path(const ExperimentConfig& config, double mu) {
  return config.output_dir / ("traj_mu" + format_double(mu) + ".csv");
}

namespace {

void log_row(std::ostream* log, const SweepSummaryRow& row, bool theta_recorded) {
  if (log == nullptr) return;
  *log << "mu=" << format_double(row.mu) << " n=" << row.n
       << " frac_plus=" << format_double(row.frac_plus)
       << " ks_tau_plus=" << (row.ks_tau_plus ? format_double(*row.ks_tau_plus) : "-")
       << " ks_tau_minus=" << (row.ks_tau_minus ? format_double(*row.ks_tau_minus) : "-")
       << " ks_theta=" << (row.ks_theta ? format_double(*row.ks_theta) : "-")
       << " wall=" << std::fixed << std::setprecision(2) << row.wall_seconds << "s"
       << std::defaultfloat << '\n';
  if (!theta_recorded) {
    *log << "warning: mu^-gamma >= r at mu=" << format_double(row.mu)
         << "; intermediate time not recorded\n";
  }
}

SweepSummaryRow run_and_write_trajectories(const ExperimentConfig& config, const ModelPair& model,
                                           double mu, std::ostream* log) {
  SingleRun run = run_single(config, model, mu);
  auto os = open_output(trajectory_csv_path(config, mu), std::ios::out | std::ios::trunc);
  write_trajectory_csv(os, run.ensemble);
  log_row(log, run.summary, records_theta(config.path_params(mu)));
  return run.summary;
}

}  // namespace

std::vector<SweepSummaryRow> run_sweep(const ExperimentConfig& config, std::ostream* log) {
  validate_config(config);
  const ModelPair model = build_model(config);
  std::vector<SweepSummaryRow> rows;
  rows.reserve(config.mu_list.size());
  for (double mu : config.mu_list) rows.push_back(run_and_write_trajectories(config, model, mu, log));

  auto os = open_output(config.output_dir / "summary.csv", std::ios::out | std::ios::trunc);
  os << summary_csv_header() << '\n';
  for (const auto& row : rows) write_summary_row(os, row, config);
  return rows;
}

SweepSummaryRow run_simulate(const ExperimentConfig& config, double mu, std::ostream* log) {
  validate_config(config);
  const ModelPair model = build_model(config);
  const SweepSummaryRow row = run_and_write_trajectories(config, model, mu, log);

  const auto summary_path = config.output_dir / "summary.csv";
  const bool fresh = !std::filesystem::exists(summary_path) ||
                     std::filesystem::file_size(summary_path) == 0;
  auto os = open_output(summary_path, std::ios::out | std::ios::app);
  if (fresh) os << summary_csv_header() << '\n';
  write_summary_row(os, row, config);
  return row;
}

void write_limits_csv(std::ostream& os, const ExperimentConfig& config, const ModelPair& model) {
  const ExitConstants plus = d_shift(model, config.r, config.quad_tol);
  const ExitConstants minus = d_shift(model, -config.r, config.quad_tol);
  os << "r,K,D_plus,D_minus\n";
  os << format_double(config.r) << ',' << format_double(plus.K) << ',' << format_double(plus.D)
     << ',' << format_double(minus.D) << '\n';
}

void write_limit_table_csv(std::ostream& os, const LimitLaw& law, double tmin, double tmax,
                           std::size_t steps) {
  if (steps < 2) throw ConfigError("steps", "must be >= 2");
  if (!(tmax > tmin)) throw ConfigError("tmax", "must exceed tmin");
  os << "t,cdf_plus,cdf_minus,theta_cdf\n";
  for (std::size_t i = 0; i < steps; ++i) {
    const double t =
        tmin + (tmax - tmin) * static_cast<double>(i) / static_cast<double>(steps - 1);
    os << format_double(t) << ',' << format_double(limit_cdf(law, 1, t)) << ','
       << format_double(limit_cdf(law, -1, t)) << ',' << format_double(theta_limit_cdf(law, t))
       << '\n';
  }
}

std::string martingale_json(const MartingaleReport& report, double mu, InitialSign sigma0) {
  json doc;
  doc["mu"] = mu;
  doc["T"] = report.T;
  doc["n"] = report.n;
  doc["sigma0_law"] = sigma0_name(sigma0);
  doc["mean_Z_T"] = report.mean_Z_T;
  doc["se_Z_T"] = report.se_Z_T;
  doc["expected_Z_T"] = sigma0 == InitialSign::kPlus ? 1.0 : (sigma0 == InitialSign::kMinus ? -1.0 : 0.0);
  doc["mean_qv"] = report.mean_qv;
  doc["se_qv"] = report.se_qv;
  doc["expected_qv"] = report.expected_qv;
  return doc.dump(2);
}

}  // namespace switchexit
