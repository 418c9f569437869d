#include "switchexit/flow.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "switchexit/error.hpp"
#include "switchexit/integrator.hpp"

namespace switchexit {

namespace {

constexpr int kMaxQuadDepth = 40;
constexpr double kEps = std::numeric_limits<double>::epsilon();

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

// Adaptive bisection on top of a fixed 15-point Kronrod rule, with an
// absolute tolerance shared out in proportion to width. A piece is also
// accepted once its error estimate is no larger than the rounding noise of
// the integrand over it, which `noise` bounds pointwise.
template <class Integrand, class Noise>
double integrate_piece(const Integrand& g, const Noise& noise, double lo, double hi, double tol,
                       int depth) {
  double error = 0.0;
  const double value = Kronrod::integrate(g, lo, hi, 0, 0.0, &error);
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "quadrature produced a non-finite value on [" << lo << ", " << hi << "]";
    throw IntegrationError(os.str());
  }
  const double mid = 0.5 * (lo + hi);
  const double width = hi - lo;
  if (error <= tol) return value;
  const double floor = 16.0 * width * std::max({noise(lo), noise(mid), noise(hi)});
  if (error <= floor) return value;
  if (depth >= kMaxQuadDepth || mid <= lo || mid >= hi) {
    std::ostringstream os;
    os << "quadrature on [" << lo << ", " << hi << "] did not reach tolerance " << tol
       << " (error estimate " << error << ")";
    throw IntegrationError(os.str());
  }
  return integrate_piece(g, noise, lo, mid, 0.5 * tol, depth + 1) +
         integrate_piece(g, noise, mid, hi, 0.5 * tol, depth + 1);
}

template <class Integrand, class Noise>
double integrate(const Integrand& g, const Noise& noise, double lo, double hi, double tol) {
  if (lo == hi) return 0.0;
  if (hi < lo) return -integrate(g, noise, hi, lo, tol);
  return integrate_piece(g, noise, lo, hi, tol, 0);
}

// 1/F(x) - 1/(a x); bounded near 0 with limit -F''(0)/(2 a^2).
auto k_integrand(const ModelPair& model) {
  return [&model](double x) {
    const double F = model.drift(x);
    if (F == 0.0) {
      std::ostringstream os;
      os.precision(17);
      os << "F vanishes at x = " << x;
      throw IntegrationError(os.str());
    }
    return 1.0 / F - 1.0 / (model.a() * x);
  };
}

// F is a difference of the two fields, so it carries rounding error of order
// eps (|F| + |G|); the subtraction near 0 amplifies it by 1/F^2.
auto k_noise(const ModelPair& model) {
  return [&model](double x) {
    const double F = std::fabs(model.drift(x));
    const double G = std::fabs(model.gap(x));
    return kEps * ((F + G) / (F * F) + 1.0 / std::fabs(model.a() * x));
  };
}

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

FlowResult flow_map(const ModelPair& model, double x0, double t, double tol) {
  if (!(std::fabs(x0) <= model.R())) throw PreconditionError("flow_map: |x0| must be <= R");
  if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("flow_map: t must be >= 0");
  if (!(tol > 0.0)) throw PreconditionError("flow_map: tol must be positive");

  FlowResult result;
  result.x_end = x0;
  if (t == 0.0 || x0 == 0.0) {
    result.t_end = t;
    return result;
  }

  const auto field = [&model](double x) { return model.drift(x); };
  double h_hint = std::min(t, 1e-2 / std::max(1.0, std::fabs(model.a())));
  const int sign0 = sgn(x0);
  ode::integrate_span(
      field, 0.0, x0, t, tol, h_hint,
      [&](const ode::Dp5Step& step) {
        if (std::fabs(step.x1) > model.R()) {
          std::ostringstream os;
          os << "flow left [-R, R] before t = " << t << " (|x| > R near t = " << step.t0 + step.h
             << ")";
          throw DomainExitError(os.str());
        }
        if (sgn(step.x1) != sign0) throw IntegrationError("flow_map: integrator crossed 0");
        ++result.steps;
        result.est_error += step.err;
        result.x_end = step.x1;
        return true;
      },
      [](double at_t, double at_x) {
        std::ostringstream os;
        os << "flow_map: step size underflow at t = " << at_t << ", x = " << at_x;
        throw IntegrationError(os.str());
      });
  result.t_end = t;
  return result;
}

double hit_time(const ModelPair& model, double delta, double r, double tol) {
  if (delta == 0.0 || r == 0.0 || sgn(delta) != sgn(r)) {
    throw PreconditionError("hit_time: delta and r must be non-zero with the same sign");
  }
  if (!(std::fabs(delta) < std::fabs(r)) || !(std::fabs(r) <= model.R())) {
    throw PreconditionError("hit_time: requires |delta| < |r| <= R");
  }
  const double log_part = std::log(r / delta) / model.a();
  return log_part + integrate(k_integrand(model), k_noise(model), delta, r, tol);
}

double k_stub_width(double r) { return std::min(1e-5, std::fabs(r) / 100.0); }

double k_constant(const ModelPair& model, double r, double tol) {
  if (r == 0.0 || !(std::fabs(r) <= model.R())) {
    throw PreconditionError("k_constant: requires 0 < |r| <= R");
  }
  const double a = model.a();
  const double eps = std::copysign(k_stub_width(r), r);
  // Integrand is -F''(0)/(2a^2) + O(x) on the stub; the O(eps^2) remainder
  // is far below the quadrature tolerance.
  const double stub = eps * (-model.drift_curvature() / (2.0 * a * a));
  return stub + integrate(k_integrand(model), k_noise(model), eps, r, tol);
}

double noise_shift(const ModelPair& model) {
  return std::log(std::sqrt(2.0 * model.a()) / model.f0()) / model.a();
}

ExitConstants d_shift(const ModelPair& model, double r, double tol) {
  if (r == 0.0) throw PreconditionError("d_shift: D(0) is not defined");
  ExitConstants c;
  c.r = r;
  c.K = k_constant(model, r, tol);
  c.D = c.K + std::log(std::fabs(r)) / model.a() + noise_shift(model);
  return c;
}

}  // namespace switchexit
