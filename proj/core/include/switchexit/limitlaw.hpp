#pragma once

// Limiting laws as mu -> infinity:
//
//   exit side                 -> sgn N
//   tau - log(mu)/(2a)        -> -log|N|/a + D(r sgn N)
//   theta - (1/2-gamma)/a log mu -> -log|H|/a,  H ~ N(0, f0^2/(2a))
//
// with N standard Gaussian. Side and |N| are independent, so the centred exit
// time given the side has CDF 2(1 - Phi(exp(-a (t - D(s r))))).

#include <cstdint>
#include <vector>

#include "switchexit/flow.hpp"
#include "switchexit/model.hpp"

namespace switchexit {

struct LimitLaw {
  double a = 0.0;
  double f0 = 0.0;
  double r = 0.0;
  double D_plus = 0.0;   // D(r)
  double D_minus = 0.0;  // D(-r)

  double shift(int side) const noexcept { return side > 0 ? D_plus : D_minus; }
};

LimitLaw make_limit_law(const ModelPair& model, double r, double tol = kDefaultQuadTol);

// Standard normal CDF, via erfc so both tails keep full relative accuracy.
double normal_cdf(double u);

// P(centred exit time <= t | side).
double limit_cdf(const LimitLaw& law, int side, double t);

// P(side = s, centred exit time <= t), summed over both sides.
double limit_joint_cdf(const LimitLaw& law, int side, double t);
double limit_unconditional_cdf(const LimitLaw& law, double t);

// P(-log|H|/a <= t).
double theta_limit_cdf(const LimitLaw& law, double t);

struct LimitSample {
  int side = 0;
  double t = 0.0;
};

std::vector<LimitSample> sample_limit(const LimitLaw& law, std::size_t n, std::uint64_t seed);

}  // namespace switchexit
