#include "switchexit/limitlaw.hpp"

#include <cmath>
#include <numbers>

#include "switchexit/error.hpp"
#include "switchexit/rng.hpp"

namespace switchexit {

LimitLaw make_limit_law(const ModelPair& model, double r, double tol) {
  if (!(r > 0.0)) throw PreconditionError("limit law requires r > 0");
  LimitLaw law;
  law.a = model.a();
  law.f0 = model.f0();
  law.r = r;
  law.D_plus = d_shift(model, r, tol).D;
  law.D_minus = d_shift(model, -r, tol).D;
  return law;
}

double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

double limit_cdf(const LimitLaw& law, int side, double t) {
  // |N| <= e^{-a(t - D)} is the complement of the event.
  const double level = std::exp(-law.a * (t - law.shift(side)));
  // 2(1 - Phi(u)) = erfc(u / sqrt 2), without cancellation in the left tail.
  return std::erfc(level / std::numbers::sqrt2);
}

double limit_joint_cdf(const LimitLaw& law, int side, double t) {
  return 0.5 * limit_cdf(law, side, t);
}

double limit_unconditional_cdf(const LimitLaw& law, double t) {
  return limit_joint_cdf(law, 1, t) + limit_joint_cdf(law, -1, t);
}

double theta_limit_cdf(const LimitLaw& law, double t) {
  const double level = std::sqrt(2.0 * law.a) / law.f0 * std::exp(-law.a * t);
  return std::erfc(level / std::numbers::sqrt2);
}

std::vector<LimitSample> sample_limit(const LimitLaw& law, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("sample_limit: n must be >= 1");
  RandomStream stream(seed, stream_id(StreamPurpose::kLimitSample, 0));
  std::vector<LimitSample> out;
  out.reserve(n);
  while (out.size() < n) {
    const double z = stream.normal();
    if (z == 0.0) continue;
    const int side = z > 0.0 ? 1 : -1;
    out.push_back({side, -std::log(std::fabs(z)) / law.a + law.shift(side)});
  }
  return out;
}

}  // namespace switchexit
