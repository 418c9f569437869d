#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "switchexit/expr.hpp"

namespace switchexit {

// Pair of vector fields (f_{+1}, f_{-1}) switched by a two-state Markov chain,
// restricted to the working segment [-R, R], with the derived quantities
// every other component needs:
//
//   F(x) = (f_{+1}(x) + f_{-1}(x)) / 2   averaged drift
//   G(x) = (f_{+1}(x) - f_{-1}(x)) / 2   half-gap
//   a    = F'(0) > 0,   f0 = f_{+1}(0) = -f_{-1}(0) > 0
//
// Instances are immutable and shareable across threads.
class ModelPair {
 public:
  const expr::Expr& f_plus() const noexcept { return f_plus_.source(); }
  const expr::Expr& f_minus() const noexcept { return f_minus_.source(); }

  double R() const noexcept { return R_; }
  double a_plus() const noexcept { return a_plus_; }
  double a_minus() const noexcept { return a_minus_; }
  double a() const noexcept { return a_; }
  double f0() const noexcept { return f0_; }
  // Grid estimate of max_sigma sup |f_sigma''| over [-R, R]. Not certified.
  double c_est() const noexcept { return c_est_; }
  // F''(0), the curvature that sets the removable-singularity value of
  // 1/F(x) - 1/(a x) at the origin.
  double drift_curvature() const noexcept { return drift_curvature_; }

  // f_sigma(x) for sigma in {+1, -1}.
  double field(int sigma, double x) const { return sigma > 0 ? f_plus_(x) : f_minus_(x); }
  double drift(double x) const { return 0.5 * (f_plus_(x) + f_minus_(x)); }
  double gap(double x) const { return 0.5 * (f_plus_(x) - f_minus_(x)); }

  double second_derivative(int sigma, double x) const {
    return sigma > 0 ? d2_plus_(x) : d2_minus_(x);
  }

  // "f_plus=...; f_minus=...; R=..." for provenance lines.
  std::string describe() const;

 private:
  friend struct ModelBuilder;
  ModelPair() = default;

  expr::CompiledExpr f_plus_;
  expr::CompiledExpr f_minus_;
  expr::CompiledExpr d2_plus_;
  expr::CompiledExpr d2_minus_;
  double R_ = 0.0;
  double a_plus_ = 0.0;
  double a_minus_ = 0.0;
  double a_ = 0.0;
  double f0_ = 0.0;
  double c_est_ = 0.0;
  double drift_curvature_ = 0.0;
};

struct ModelCheck {
  std::string name;
  bool passed = true;
  bool fatal = true;  // non-fatal checks are reported as warnings
  std::optional<double> witness;
  std::string detail;
};

struct ValidationReport {
  std::vector<ModelCheck> checks;
  std::optional<ModelPair> model;  // present when every fatal check passed

  bool ok() const noexcept { return model.has_value(); }
  std::string to_text() const;
};

// Number of equispaced validation points on [-R, R], plus the refinement
// points placed in [-1e-3, 1e-3].
inline constexpr int kValidationGridPoints = 10001;
inline constexpr int kRefinementPoints = 21;
inline constexpr double kRefinementHalfWidth = 1e-3;

std::vector<double> validation_grid(double R);

// Parses both fields and runs every assumption check. Throws ParseError,
// NotDifferentiableError or PreconditionError (R <= 0); assumption failures
// are reported, not thrown.
ValidationReport validate_model(std::string_view f_plus_text, std::string_view f_minus_text,
                                double R);

// As validate_model(), but throws AssumptionError for the first failed fatal
// check.
ModelPair build_model(std::string_view f_plus_text, std::string_view f_minus_text, double R);

double drift_F(const ModelPair& model, double x);
double gap_G(const ModelPair& model, double x);

}  // namespace switchexit
