#pragma once

// Deterministic analytics of the averaged ODE z' = F(z): the flow map, the
// hitting time of level r started from delta, and the constants K(r), D(r)
// that shift the centred exit time.

#include <cstdint>

#include "switchexit/model.hpp"

namespace switchexit {

inline constexpr double kDefaultOdeTol = 1e-10;
inline constexpr double kDefaultQuadTol = 1e-10;

struct FlowResult {
  double x_end = 0.0;
  double t_end = 0.0;
  std::int64_t steps = 0;
  double est_error = 0.0;  // sum of accepted local error estimates
};

struct ExitConstants {
  double r = 0.0;
  double K = 0.0;
  double D = 0.0;
};

// Approximates S^t x0 with adaptive Dormand-Prince steps. Throws
// DomainExitError if the flow leaves [-R, R] before time t.
FlowResult flow_map(const ModelPair& model, double x0, double t, double tol = kDefaultOdeTol);

// t(delta, r) = integral of 1/F from delta to r, evaluated as
// log(r/delta)/a + integral of (1/F(x) - 1/(a x)) so the quadrature only
// sees a bounded integrand. Requires sgn delta = sgn r and |delta| < |r| <= R.
double hit_time(const ModelPair& model, double delta, double r, double tol = kDefaultQuadTol);

// K(r) = integral over [0, r] of (1/F(x) - 1/(a x)).
double k_constant(const ModelPair& model, double r, double tol = kDefaultQuadTol);

// log(sqrt(2a)/f0)/a, the model-only part of D.
double noise_shift(const ModelPair& model);

// D(r) = K(r) + log|r|/a + log(sqrt(2a)/f0)/a.
ExitConstants d_shift(const ModelPair& model, double r, double tol = kDefaultQuadTol);

// Half-width of the stub [0, eps] of K(r) that is integrated from the Taylor
// value of the integrand at 0 instead of by quadrature.
double k_stub_width(double r);

}  // namespace switchexit
