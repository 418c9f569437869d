#include "switchexit/stats.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "switchexit/error.hpp"

namespace switchexit::stats {
namespace {

double uniform_cdf(double t) { return std::clamp(t, 0.0, 1.0); }

TEST(Ecdf, Counts) {
  const EmpiricalCdf e = ecdf(std::vector<double>{3.0, 1.0, 2.0});
  EXPECT_DOUBLE_EQ(e(2.0), 2.0 / 3.0);
  EXPECT_EQ(e(0.5), 0.0);
  EXPECT_EQ(e(3.0), 1.0);
  EXPECT_EQ(e(100.0), 1.0);
  EXPECT_EQ(e.size(), 3u);
  EXPECT_EQ(e.sorted_samples(), (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(Ecdf, Ties) {
  const EmpiricalCdf e(std::vector<double>{1.0, 1.0, 2.0});
  EXPECT_DOUBLE_EQ(e(1.0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(e(0.999), 0.0);
}

TEST(Ecdf, Errors) {
  EXPECT_THROW(EmpiricalCdf(std::vector<double>{}), PreconditionError);
  EXPECT_THROW(EmpiricalCdf(std::vector<double>{1.0, std::nan("")}), PreconditionError);
}

TEST(Ecdf, OrderInvariant) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  std::vector<double> xs(500);
  for (auto& x : xs) x = z(rng);
  std::vector<double> shuffled = xs;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  const EmpiricalCdf a(xs);
  const EmpiricalCdf b(shuffled);
  const EmpiricalCdf c(sorted);
  EXPECT_EQ(a.sorted_samples(), b.sorted_samples());
  EXPECT_EQ(a.sorted_samples(), c.sorted_samples());
  for (double t = -3.0; t <= 3.0; t += 0.1) EXPECT_EQ(a(t), b(t));
}

TEST(KsStatistic, SingleSample) {
  const EmpiricalCdf e(std::vector<double>{0.5});
  EXPECT_DOUBLE_EQ(ks_statistic(e, uniform_cdf), 0.5);
}

TEST(KsStatistic, SmallExactCase) {
  // Samples 0.1, 0.4, 0.9 vs U(0,1): max(1/3-0.1, 0.4-1/3, 2/3-0.4, 0.9-2/3, 1-0.9).
  const EmpiricalCdf e(std::vector<double>{0.9, 0.1, 0.4});
  EXPECT_DOUBLE_EQ(ks_statistic(e, uniform_cdf), 2.0 / 3.0 - 0.4);
}

TEST(KsStatistic, SamplesFromReference) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z;
  std::vector<double> xs(10000);
  for (auto& x : xs) x = z(rng);
  const double d = ks_statistic(EmpiricalCdf(xs), oracle::normal_cdf_series);
  EXPECT_LE(d, 1.63 / 100.0);
}

TEST(KsStatistic, ShiftedNormalLimit) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  std::vector<double> xs(200000);
  for (auto& x : xs) x = z(rng);
  const double d =
      ks_statistic(EmpiricalCdf(xs), [](double t) { return oracle::normal_cdf_series(t - 1.0); });
  EXPECT_NEAR(d, 0.382924922548026207, 1.63 / std::sqrt(200000.0));
}

TEST(KsStatistic, AffineInvariance) {
  std::mt19937_64 rng(10);
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> xs(3000);
  for (auto& x : xs) x = ex(rng);
  const auto F = [](double t) { return t <= 0 ? 0.0 : 1.0 - std::exp(-t * 0.9); };
  const double d = ks_statistic(EmpiricalCdf(xs), F);
  for (auto [scale, shift] : {std::pair{2.0, 0.0}, std::pair{0.5, -3.0}, std::pair{7.0, 11.0}}) {
    std::vector<double> ys;
    for (double x : xs) ys.push_back(scale * x + shift);
    const double dy =
        ks_statistic(EmpiricalCdf(ys), [&](double t) { return F((t - shift) / scale); });
    EXPECT_NEAR(dy, d, 1e-12);
  }
}

TEST(KsStatistic, Bounded) {
  const EmpiricalCdf e(std::vector<double>{5.0, 6.0});
  EXPECT_EQ(ks_statistic(e, uniform_cdf), 1.0);
  const EmpiricalCdf below(std::vector<double>{-5.0});
  EXPECT_EQ(ks_statistic(below, uniform_cdf), 1.0);
  // A misbehaving reference outside [0, 1] is clamped.
  EXPECT_LE(ks_statistic(e, [](double) { return 2.0; }), 1.0);
  EXPECT_GE(ks_statistic(e, [](double) { return -1.0; }), 0.0);
}

TEST(KsCriticalValue, Values) {
  EXPECT_DOUBLE_EQ(ks_critical_value(10000, 0.01), 0.0163);
  EXPECT_DOUBLE_EQ(ks_critical_value(10000, 0.05), 0.0136);
  EXPECT_THROW(ks_critical_value(0, 0.05), PreconditionError);
  EXPECT_THROW(ks_critical_value(10, 0.1), PreconditionError);
}

TEST(BinomialInterval, Examples) {
  const auto [lo, hi] = binomial_interval(50, 100, 1.96);
  EXPECT_NEAR(lo, 0.402, 1e-12);
  EXPECT_NEAR(hi, 0.598, 1e-12);
  EXPECT_EQ(binomial_interval(0, 100, 1.96).first, 0.0);
  EXPECT_EQ(binomial_interval(100, 100, 1.96).second, 1.0);
  const auto [l2, h2] = binomial_interval(1, 10, 3.0);
  EXPECT_EQ(l2, 0.0);
  EXPECT_NEAR(h2, 0.1 + 3.0 * std::sqrt(0.09 / 10.0), 1e-15);
}

TEST(BinomialInterval, Errors) {
  EXPECT_THROW(binomial_interval(1, 0, 1.0), PreconditionError);
  EXPECT_THROW(binomial_interval(11, 10, 1.0), PreconditionError);
  EXPECT_THROW(binomial_interval(1, 10, 0.0), PreconditionError);
}

}  // namespace
}  // namespace switchexit::stats
