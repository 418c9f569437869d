#include "switchexit/pdmp.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "switchexit/error.hpp"

namespace switchexit {

namespace {

int initial_sign(InitialSign law, RandomStream& stream) {
  switch (law) {
    case InitialSign::kPlus: return 1;
    case InitialSign::kMinus: return -1;
    case InitialSign::kUniform: break;
  }
  return stream.sign();
}

[[noreturn]] void step_underflow(double t, double x) {
  std::ostringstream os;
  os.precision(17);
  os << "step size underflow at t = " << t << ", x = " << x;
  throw IntegrationError(os.str());
}

}  // namespace

void check_path_params(const ModelPair& model, const PathParams& params) {
  if (!(params.mu > 0.0) || !std::isfinite(params.mu)) {
    throw PreconditionError("switching rate mu must be positive");
  }
  if (!(params.r > 0.0) || !(params.r <= model.R())) {
    throw PreconditionError("exit level r must satisfy 0 < r <= R");
  }
  if (!(params.gamma > 0.25 && params.gamma < 0.5)) {
    throw PreconditionError("gamma outside (1/4,1/2)");
  }
  if (!(params.ode_tol > 0.0)) throw PreconditionError("ode_tol must be positive");
}

bool records_theta(const PathParams& params) {
  return std::pow(params.mu, -params.gamma) < params.r;
}

PathRecord simulate_path(const ModelPair& model, const PathParams& params, RandomStream& stream,
                         std::uint64_t traj_index, const StepObserver* observer) {
  check_path_params(model, params);

  const double r = params.r;
  const double theta_level = std::pow(params.mu, -params.gamma);
  const bool want_theta = theta_level < r;

  PathRecord rec;
  rec.traj_index = traj_index;

  int sigma = initial_sign(params.sigma0, stream);
  double t = 0.0;
  double x = 0.0;
  double h_hint = 0.0;
  bool exited = false;
  std::uint64_t events = 0;

  while (!exited) {
    if (++events > params.event_cap) {
      throw CapExceededError("path " + std::to_string(traj_index) + " exceeded " +
                             std::to_string(params.event_cap) + " switching events");
    }
    const double hold = stream.exponential(params.mu);
    const int active = sigma;
    const auto field = [&model, active](double y) { return model.field(active, y); };

    ode::integrate_span(
        field, t, x, hold, params.ode_tol, h_hint,
        [&](const ode::Dp5Step& step) {
          if (observer != nullptr) (*observer)(step, active);
          const double mag = std::fabs(step.x1);
          if (want_theta && !rec.theta && mag >= theta_level) {
            rec.theta = ode::locate_crossing(
                step, [theta_level](double y) { return std::fabs(y) - theta_level; },
                kCrossingTimeTol, kCrossingLevelTol);
          }
          if (mag >= r) {
            rec.tau = ode::locate_crossing(
                step, [r](double y) { return std::fabs(y) - r; }, kCrossingTimeTol, kCrossingLevelTol);
            rec.side = step.x1 > 0.0 ? 1 : -1;
            exited = true;
            return false;
          }
          x = step.x1;
          return true;
        },
        step_underflow);

    if (!exited) {
      t += hold;
      sigma = -sigma;
      ++rec.n_switches;
    }
  }

  const double log_mu = std::log(params.mu);
  rec.centered_tau = rec.tau - log_mu / (2.0 * model.a());
  if (rec.theta) rec.centered_theta = *rec.theta - (0.5 - params.gamma) / model.a() * log_mu;
  return rec;
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  if (workers == 0) throw PreconditionError("workers must be >= 1");
  const std::size_t threads = std::min<std::size_t>(workers, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = n;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      if (failed.load(std::memory_order_relaxed)) return;
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

Ensemble run_ensemble(const ModelPair& model, const PathParams& params, std::size_t n,
                      std::uint64_t master_seed, unsigned workers) {
  if (n == 0) throw PreconditionError("ensemble size n must be >= 1");
  if (workers == 0) throw PreconditionError("workers must be >= 1");
  check_path_params(model, params);

  Ensemble ens;
  ens.records.resize(n);
  ens.model_descriptor = model.describe();
  ens.mu = params.mu;
  ens.r = params.r;
  ens.gamma = params.gamma;
  ens.master_seed = master_seed;
  ens.n = n;

  parallel_for(n, workers, [&](std::size_t i) {
    RandomStream stream(master_seed, stream_id(StreamPurpose::kPath, i));
    ens.records[i] = simulate_path(model, params, stream, i);
  });
  return ens;
}

MartingaleReport martingale_probe(const ModelPair& model, double mu, double T, std::size_t n,
                                  std::uint64_t master_seed, InitialSign sigma0, double ode_tol,
                                  unsigned workers) {
  if (!(mu > 0.0)) throw PreconditionError("switching rate mu must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw PreconditionError("horizon T must be positive");
  if (n < 2) throw PreconditionError("martingale probe needs n >= 2 paths");

  struct Sample {
    double z = 0.0;
    double qv = 0.0;
  };
  std::vector<Sample> samples(n);

  parallel_for(n, workers, [&](std::size_t i) {
    RandomStream stream(master_seed, stream_id(StreamPurpose::kMartingale, i));
    int sigma = initial_sign(sigma0, stream);
    double t = 0.0;
    double x = 0.0;
    double h_hint = 0.0;
    double signed_time = 0.0;  // int_0^t sigma_s ds
    std::int64_t jumps = 0;
    while (t < T) {
      const double draw = stream.exponential(mu);
      const bool truncated = draw >= T - t;
      const double hold = truncated ? T - t : draw;
      const int active = sigma;
      ode::integrate_span(
          [&model, active](double y) { return model.field(active, y); }, t, x, hold, ode_tol,
          h_hint,
          [&](const ode::Dp5Step& step) {
            if (std::fabs(step.x1) > model.R()) {
              throw DomainExitError("martingale probe: path " + std::to_string(i) +
                                    " left [-R, R] before T");
            }
            x = step.x1;
            return true;
          },
          step_underflow);
      signed_time += active * hold;
      if (truncated) break;
      t += hold;
      sigma = -sigma;
      ++jumps;
    }
    samples[i].z = sigma + 2.0 * mu * signed_time;
    samples[i].qv = 4.0 * static_cast<double>(jumps);
  });

  auto mean_and_se = [&](auto get) {
    double sum = 0.0;
    for (const auto& s : samples) sum += get(s);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& s : samples) ss += (get(s) - mean) * (get(s) - mean);
    const double var = ss / static_cast<double>(n - 1);
    return std::pair{mean, std::sqrt(var / static_cast<double>(n))};
  };

  MartingaleReport rep;
  rep.T = T;
  rep.n = n;
  std::tie(rep.mean_Z_T, rep.se_Z_T) = mean_and_se([](const Sample& s) { return s.z; });
  std::tie(rep.mean_qv, rep.se_qv) = mean_and_se([](const Sample& s) { return s.qv; });
  rep.expected_qv = 4.0 * mu * T;
  return rep;
}

}  // namespace switchexit
