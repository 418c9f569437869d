#pragma once

// Independent reference values used by the tests. Nothing here calls into the
// library's numerical paths.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "switchexit/expr.hpp"

namespace oracle {

// f_plus = e^x, f_minus = -e^{-x}: F = sinh, G = cosh, a = 1, f0 = 1.
// From the antiderivative of 1/sinh, ln tanh(x/2).
inline double sinh_flow(double x0, double t) {
  return 2.0 * std::atanh(std::exp(t) * std::tanh(x0 / 2.0));
}

inline double sinh_hit_time(double delta, double r) {
  return std::log(std::tanh(std::fabs(r) / 2.0)) - std::log(std::tanh(std::fabs(delta) / 2.0));
}

inline double sinh_K(double r) {
  const double ar = std::fabs(r);
  return std::log(2.0 * std::tanh(ar / 2.0) / ar);
}

// Phi(u) from erf(z) = 2/sqrt(pi) e^{-z^2} sum_n 2^n z^{2n+1} / (2n+1)!!,
// a series of positive terms, in long double.
inline double normal_cdf_series(double u) {
  const long double z = std::fabs(static_cast<long double>(u)) / std::sqrt(2.0L);
  // Past z = 9 the tail is below 1e-36; the series would overflow.
  if (z > 9.0L) return u >= 0.0 ? 1.0 : 0.0;
  long double term = z;
  long double sum = z;
  for (int n = 1; n < 400; ++n) {
    term *= 2.0L * z * z / (2.0L * n + 1.0L);
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double erf = 2.0L / std::sqrt(pi) * std::exp(-z * z) * sum;
  const long double half = 0.5L * (1.0L + erf);
  return static_cast<double>(u >= 0.0 ? half : 1.0L - half);
}

template <class F>
double central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Random expression trees of bounded depth for property tests.
class ExprGenerator {
 public:
  explicit ExprGenerator(std::uint64_t seed, bool allow_abs = false)
      : rng_(seed), allow_abs_(allow_abs) {}

  switchexit::expr::Expr operator()(int max_depth) { return gen(max_depth); }

 private:
  using Expr = switchexit::expr::Expr;
  using Op = switchexit::expr::Op;

  Expr leaf() {
    if (coin(0.6)) return Expr::var();
    std::uniform_real_distribution<double> value(0.25, 2.0);
    const double v = std::round(value(rng_) * 4.0) / 4.0;
    return coin(0.2) ? Expr::neg(Expr::constant(v)) : Expr::constant(v);
  }

  Expr gen(int depth) {
    if (depth <= 1 || coin(0.25)) return leaf();
    std::uniform_int_distribution<int> kind(0, 12);
    switch (kind(rng_)) {
      case 0: return Expr::binary(Op::kAdd, gen(depth - 1), gen(depth - 1));
      case 1: return Expr::binary(Op::kSub, gen(depth - 1), gen(depth - 1));
      case 2: return Expr::binary(Op::kMul, gen(depth - 1), gen(depth - 1));
      case 3: return Expr::binary(Op::kDiv, gen(depth - 1), gen(depth - 1));
      case 4: {
        std::uniform_int_distribution<int> power(2, 3);
        return Expr::binary(Op::kPow, gen(depth - 1), Expr::constant(power(rng_)));
      }
      case 5: return Expr::neg(gen(depth - 1));
      case 6: return Expr::function(Op::kExp, gen(depth - 1));
      case 7: return Expr::function(Op::kSin, gen(depth - 1));
      case 8: return Expr::function(Op::kCos, gen(depth - 1));
      case 9: return Expr::function(Op::kTanh, gen(depth - 1));
      case 10: return Expr::function(coin(0.5) ? Op::kSinh : Op::kCosh, gen(depth - 1));
      case 11: return Expr::function(coin(0.5) ? Op::kLog : Op::kSqrt, gen(depth - 1));
      default:
        return allow_abs_ ? Expr::function(Op::kAbs, gen(depth - 1))
                          : Expr::binary(Op::kMul, Expr::constant(0.5), gen(depth - 1));
    }
  }

  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::mt19937_64 rng_;
  bool allow_abs_;
};

}  // namespace oracle
