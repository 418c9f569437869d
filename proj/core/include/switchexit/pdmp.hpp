#pragma once

// Event-driven simulation of the switched system
//
//   dx/dt = f_{sigma_t}(x),  x_0 = 0,
//
// where sigma_t flips between +1 and -1 after Exp(mu) holding times. Between
// flips the active field is integrated with Dormand-Prince steps; crossings
// of |x| = level are located by bisection on the dense output.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "switchexit/flow.hpp"
#include "switchexit/integrator.hpp"
#include "switchexit/model.hpp"
#include "switchexit/rng.hpp"

namespace switchexit {

enum class InitialSign { kPlus, kMinus, kUniform };

inline constexpr double kDefaultGamma = 0.375;
inline constexpr std::uint64_t kDefaultEventCap = 1'000'000'000;
inline constexpr double kCrossingTimeTol = 1e-9;
inline constexpr double kCrossingLevelTol = 1e-9;

struct PathParams {
  double mu = 0.0;
  double r = 0.0;
  double gamma = kDefaultGamma;
  double ode_tol = kDefaultOdeTol;
  InitialSign sigma0 = InitialSign::kUniform;
  std::uint64_t event_cap = kDefaultEventCap;
};

struct PathRecord {
  double tau = 0.0;
  int side = 0;
  std::optional<double> theta;
  std::int64_t n_switches = 0;
  std::uint64_t traj_index = 0;
  double centered_tau = 0.0;
  std::optional<double> centered_theta;

  friend bool operator==(const PathRecord&, const PathRecord&) = default;
};

struct Ensemble {
  std::vector<PathRecord> records;
  std::string model_descriptor;
  double mu = 0.0;
  double r = 0.0;
  double gamma = 0.0;
  std::uint64_t master_seed = 0;
  std::size_t n = 0;
};

struct MartingaleReport {
  double T = 0.0;
  std::size_t n = 0;
  double mean_Z_T = 0.0;
  double se_Z_T = 0.0;
  double mean_qv = 0.0;  // sample mean of [Z]_T = 4 B(T)
  double se_qv = 0.0;
  double expected_qv = 0.0;  // 4 mu T
};

// Called for every accepted integration step with the active sign.
using StepObserver = std::function<void(const ode::Dp5Step&, int sigma)>;

// Throws PreconditionError unless mu > 0, 0 < r <= R and gamma in (1/4, 1/2).
void check_path_params(const ModelPair& model, const PathParams& params);

// True when the intermediate level mu^-gamma lies strictly inside (0, r).
bool records_theta(const PathParams& params);

PathRecord simulate_path(const ModelPair& model, const PathParams& params, RandomStream& stream,
                         std::uint64_t traj_index = 0, const StepObserver* observer = nullptr);

// Record i is simulated from stream (master_seed, i); the result does not
// depend on `workers`.
Ensemble run_ensemble(const ModelPair& model, const PathParams& params, std::size_t n,
                      std::uint64_t master_seed, unsigned workers);

// Simulates n paths to time T and reports the sample behaviour of
// Z_T = sigma_T + 2 mu int_0^T sigma_s ds and of [Z]_T = 4 B(T).
MartingaleReport martingale_probe(const ModelPair& model, double mu, double T, std::size_t n,
                                  std::uint64_t master_seed,
                                  InitialSign sigma0 = InitialSign::kPlus,
                                  double ode_tol = kDefaultOdeTol, unsigned workers = 1);

// Runs body(i) for i in [0, n) on `workers` threads. The first exception (by
// index) is rethrown after all threads join.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace switchexit
