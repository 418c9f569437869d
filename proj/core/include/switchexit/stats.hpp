#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace switchexit::stats {

class EmpiricalCdf {
 public:
  // Throws PreconditionError on empty input or NaN samples.
  explicit EmpiricalCdf(std::vector<double> samples);

  // #{samples <= t} / n, right-continuous.
  double operator()(double t) const;

  std::size_t size() const noexcept { return sorted_.size(); }
  const std::vector<double>& sorted_samples() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

EmpiricalCdf ecdf(std::span<const double> samples);

// Exact sup-distance between the ECDF and a continuous reference CDF:
// max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n).
double ks_statistic(const EmpiricalCdf& e, const std::function<double(double)>& cdf);

// Asymptotic one-sample critical value c_alpha / sqrt(n) for alpha in {0.05, 0.01}.
double ks_critical_value(std::size_t n, double alpha);

// Wald interval p +- z sqrt(p(1-p)/n), clipped to [0, 1].
std::pair<double, double> binomial_interval(std::size_t k, std::size_t n, double z);

}  // namespace switchexit::stats
