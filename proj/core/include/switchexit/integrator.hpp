#pragma once

// Scalar Dormand-Prince 5(4) stepper with the 4th-order continuous extension.
// Header-only so the field call inlines into the PDMP event loop.

#include <algorithm>
#include <cmath>

namespace switchexit::ode {

// One attempted step and everything needed to interpolate inside it.
struct Dp5Step {
  double t0 = 0.0;
  double h = 0.0;
  double x0 = 0.0;
  double x1 = 0.0;
  double err = 0.0;  // |x5 - x4|
  double k1 = 0.0, k3 = 0.0, k4 = 0.0, k5 = 0.0, k6 = 0.0, k7 = 0.0;

  // Dense output at t0 + s * h, s in [0, 1].
  double at(double s) const noexcept {
    constexpr double d1 = -12715105075.0 / 11282082432.0;
    constexpr double d3 = 87487479700.0 / 32700410799.0;
    constexpr double d4 = -10690763975.0 / 1880347072.0;
    constexpr double d5 = 701980252875.0 / 199316789632.0;
    constexpr double d6 = -1453857185.0 / 822651844.0;
    constexpr double d7 = 69997945.0 / 29380423.0;
    const double dx = x1 - x0;
    const double r3 = h * k1 - dx;
    const double r4 = dx - h * k7 - r3;
    const double r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    const double s1 = 1.0 - s;
    return x0 + s * (dx + s1 * (r3 + s * (r4 + s1 * r5)));
  }
};

// k1 = f(x0) is passed in so a caller can reuse the FSAL stage.
template <class Field>
inline Dp5Step dp5_step(Field&& f, double t0, double x0, double k1, double h) {
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                   a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                   a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                   b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                   e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  Dp5Step s;
  s.t0 = t0;
  s.h = h;
  s.x0 = x0;
  s.k1 = k1;
  const double k2 = f(x0 + h * (a21 * k1));
  s.k3 = f(x0 + h * (a31 * k1 + a32 * k2));
  s.k4 = f(x0 + h * (a41 * k1 + a42 * k2 + a43 * s.k3));
  s.k5 = f(x0 + h * (a51 * k1 + a52 * k2 + a53 * s.k3 + a54 * s.k4));
  s.k6 = f(x0 + h * (a61 * k1 + a62 * k2 + a63 * s.k3 + a64 * s.k4 + a65 * s.k5));
  s.x1 = x0 + h * (b1 * k1 + b3 * s.k3 + b4 * s.k4 + b5 * s.k5 + b6 * s.k6);
  s.k7 = f(s.x1);
  s.err = std::fabs(h * (e1 * k1 + e3 * s.k3 + e4 * s.k4 + e5 * s.k5 + e6 * s.k6 + e7 * s.k7));
  return s;
}

// Error control is per unit time: a step of length h is accepted when its
// local error estimate is at most tol * h * max(1, |x|).
inline double scaled_error(const Dp5Step& s, double tol) noexcept {
  const double scale = tol * s.h * std::max({1.0, std::fabs(s.x0), std::fabs(s.x1)});
  return s.err / scale;
}

// Step-size factor from a scaled error; clamped to [0.2, 5].
inline double step_factor(double scaled_err) noexcept {
  // 0.9 * e^{-1/4} >= 5 below this threshold; skips the pow() in the common case.
  if (scaled_err <= 1e-3) return 5.0;
  return std::clamp(0.9 * std::pow(scaled_err, -0.25), 0.2, 5.0);
}

inline constexpr double kMinStep = 1e-14;

// Advances x' = f(x) from (t, x) over a span `dt`, calling on_step(step) for
// every accepted step in order. on_step returns false to stop early; the
// function then returns false. `h_hint` carries the step size between calls.
// Throws via `fail` when the step size underflows.
template <class Field, class OnStep, class Fail>
inline bool integrate_span(Field&& f, double t, double x, double dt, double tol, double& h_hint,
                           OnStep&& on_step, Fail&& fail) {
  const double t_end = t + dt;
  double k1 = f(x);
  double h = std::min(h_hint > 0.0 ? h_hint : dt, dt);
  while (t < t_end) {
    const bool last = h >= t_end - t;
    if (last) h = t_end - t;
    Dp5Step step = dp5_step(f, t, x, k1, h);
    const double e = scaled_error(step, tol);
    if (e <= 1.0 && std::isfinite(step.x1)) {
      if (!on_step(step)) return false;
      if (last) break;
      t += h;
      x = step.x1;
      k1 = step.k7;
      h *= step_factor(e);
      h_hint = h;
    } else {
      h *= std::isfinite(e) ? std::max(0.2, step_factor(e)) : 0.2;
      if (h < kMinStep * std::max(1.0, std::fabs(t))) fail(t, x);
    }
  }
  return true;
}

// Bisects the dense output of `step` for the first root of g(x(s)) on [0, 1],
// given g(x0) < 0 <= g(x1). Returns a time t with g(x(t)) >= 0, bracketed to
// `t_tol` and with g(x(t)) <= `g_tol`, unless the bracket reaches the
// resolution of double first.
template <class Indicator>
inline double locate_crossing(const Dp5Step& step, Indicator&& g, double t_tol, double g_tol) {
  double lo = 0.0;
  double hi = 1.0;
  double g_hi = g(step.x1);
  const double s_tol = step.h > 0.0 ? t_tol / step.h : 1.0;
  while ((hi - lo) > s_tol || g_hi > g_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(step.at(mid));
    if (g_mid >= 0.0) {
      hi = mid;
      g_hi = g_mid;
    } else {
      lo = mid;
    }
  }
  return step.t0 + hi * step.h;
}

}  // namespace switchexit::ode
