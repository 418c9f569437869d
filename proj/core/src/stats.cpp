#include "switchexit/stats.hpp"

#include <algorithm>
#include <cmath>

#include "switchexit/error.hpp"

namespace switchexit::stats {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw PreconditionError("ecdf: empty sample");
  if (std::any_of(sorted_.begin(), sorted_.end(), [](double v) { return std::isnan(v); })) {
    throw PreconditionError("ecdf: NaN sample");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double t) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

EmpiricalCdf ecdf(std::span<const double> samples) {
  return EmpiricalCdf(std::vector<double>(samples.begin(), samples.end()));
}

double ks_statistic(const EmpiricalCdf& e, const std::function<double(double)>& cdf) {
  const auto& xs = e.sorted_samples();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0) throw PreconditionError("ks_critical_value: n must be >= 1");
  double c = 0.0;
  if (alpha == 0.05) {
    c = 1.36;
  } else if (alpha == 0.01) {
    c = 1.63;
  } else {
    throw PreconditionError("ks_critical_value: alpha must be 0.05 or 0.01");
  }
  return c / std::sqrt(static_cast<double>(n));
}

std::pair<double, double> binomial_interval(std::size_t k, std::size_t n, double z) {
  if (n == 0 || k > n) throw PreconditionError("binomial_interval: requires 0 <= k <= n, n >= 1");
  if (!(z > 0.0)) throw PreconditionError("binomial_interval: z must be positive");
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

}  // namespace switchexit::stats
