#include "switchexit/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "switchexit/error.hpp"

namespace switchexit {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kTaylorSlack = 1.01;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::vector<double> validation_grid(double R) {
  std::vector<double> grid;
  grid.reserve(kValidationGridPoints + kRefinementPoints);
  const int intervals = kValidationGridPoints - 1;
  for (int i = 0; i <= intervals; ++i) {
    // Symmetric construction keeps x and -x both exactly on the grid.
    grid.push_back(R * static_cast<double>(2 * i - intervals) / intervals);
  }
  const int half = (kRefinementPoints - 1) / 2;
  for (int i = -half; i <= half; ++i) {
    grid.push_back(kRefinementHalfWidth * static_cast<double>(i) / half);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

struct ModelBuilder {
  static ValidationReport run(std::string_view plus_text, std::string_view minus_text, double R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw PreconditionError("R must be positive and finite");

    const expr::Expr fp = expr::parse(plus_text);
    const expr::Expr fm = expr::parse(minus_text);
    const expr::Expr dfp = expr::differentiate(fp);
    const expr::Expr dfm = expr::differentiate(fm);
    const expr::Expr d2fp = expr::differentiate(dfp);
    const expr::Expr d2fm = expr::differentiate(dfm);

    ModelPair m;
    m.f_plus_ = expr::CompiledExpr(fp);
    m.f_minus_ = expr::CompiledExpr(fm);
    m.d2_plus_ = expr::CompiledExpr(d2fp);
    m.d2_minus_ = expr::CompiledExpr(d2fm);
    m.R_ = R;

    ValidationReport report;
    auto& checks = report.checks;

    // Values at the origin.
    ModelCheck origin;
    origin.name = "fields and derivatives evaluable at 0";
    double fp0 = 0.0;
    double fm0 = 0.0;
    try {
      fp0 = expr::eval(fp, 0.0);
      fm0 = expr::eval(fm, 0.0);
      m.a_plus_ = expr::eval(dfp, 0.0);
      m.a_minus_ = expr::eval(dfm, 0.0);
      m.drift_curvature_ = 0.5 * (expr::eval(d2fp, 0.0) + expr::eval(d2fm, 0.0));
    } catch (const DomainError& e) {
      origin.passed = false;
      origin.witness = 0.0;
      origin.detail = e.what();
      checks.push_back(origin);
      return report;
    }
    checks.push_back(origin);
    m.a_ = 0.5 * (m.a_plus_ + m.a_minus_);
    m.f0_ = fp0;

    ModelCheck orientation;
    orientation.name = "f_plus(0) > 0 > f_minus(0)";
    if (!(fp0 > 0.0 && fm0 < 0.0)) {
      orientation.passed = false;
      orientation.witness = 0.0;
      orientation.detail = "f_plus(0) = " + fmt(fp0) + ", f_minus(0) = " + fmt(fm0);
    }
    checks.push_back(orientation);

    ModelCheck symmetry;
    symmetry.name = "|f_plus(0)| = |f_minus(0)|";
    if (std::fabs(fp0 + fm0) > kSymmetryTolerance * std::max(1.0, std::fabs(fp0))) {
      symmetry.passed = false;
      symmetry.witness = 0.0;
      symmetry.detail = "f_plus(0) + f_minus(0) = " + fmt(fp0 + fm0);
    }
    checks.push_back(symmetry);

    ModelCheck unstable;
    unstable.name = "a = F'(0) > 0";
    if (!(m.a_ > 0.0)) {
      unstable.passed = false;
      unstable.witness = 0.0;
      unstable.detail = "a = (" + fmt(m.a_plus_) + " + " + fmt(m.a_minus_) + ")/2 = " + fmt(m.a_);
    }
    checks.push_back(unstable);

    ModelCheck evaluable;
    evaluable.name = "fields evaluable on [-R, R]";
    ModelCheck drift_sign;
    drift_sign.name = "sgn F(x) = sgn x";
    ModelCheck gap_sign;
    gap_sign.name = "G(x) > 0";
    ModelCheck taylor;
    taylor.name = "Taylor remainder within c_est x^2 / 2";
    taylor.fatal = false;

    struct Sample {
      double x, fp, fm, d2p, d2m;
    };
    std::vector<Sample> samples;
    const auto grid = validation_grid(R);
    samples.reserve(grid.size());
    for (double x : grid) {
      try {
        samples.push_back({x, expr::eval(fp, x), expr::eval(fm, x), expr::eval(d2fp, x),
                           expr::eval(d2fm, x)});
      } catch (const DomainError& e) {
        if (evaluable.passed) {
          evaluable.passed = false;
          evaluable.witness = x;
          evaluable.detail = e.what();
        }
      }
    }
    checks.push_back(evaluable);
    if (!evaluable.passed) return report;

    double c = 0.0;
    for (const auto& s : samples) c = std::max({c, std::fabs(s.d2p), std::fabs(s.d2m)});
    m.c_est_ = c;

    for (const auto& s : samples) {
      if (s.x == 0.0) continue;
      const double F = 0.5 * (s.fp + s.fm);
      const double G = 0.5 * (s.fp - s.fm);
      if (drift_sign.passed && !((F > 0.0) == (s.x > 0.0) && F != 0.0)) {
        drift_sign.passed = false;
        drift_sign.witness = s.x;
        drift_sign.detail = "F(x) = " + fmt(F);
      }
      if (gap_sign.passed && !(G > 0.0)) {
        gap_sign.passed = false;
        gap_sign.witness = s.x;
        gap_sign.detail = "G(x) = " + fmt(G);
      }
      if (taylor.passed) {
        const double bound = kTaylorSlack * c * s.x * s.x / 2.0;
        const double rp = std::fabs(s.fp - fp0 - m.a_plus_ * s.x);
        const double rm = std::fabs(s.fm + fp0 - m.a_minus_ * s.x);
        const double slack = 1e-12 * (1.0 + std::fabs(s.fp) + std::fabs(s.fm));
        if (std::max(rp, rm) > bound + slack) {
          taylor.passed = false;
          taylor.witness = s.x;
          taylor.detail = "remainder " + fmt(std::max(rp, rm)) + " exceeds " + fmt(bound);
        }
      }
    }
    checks.push_back(drift_sign);
    checks.push_back(gap_sign);
    checks.push_back(taylor);

    const bool fatal_failure = std::any_of(checks.begin(), checks.end(),
                                           [](const ModelCheck& k) { return k.fatal && !k.passed; });
    if (!fatal_failure) report.model = std::move(m);
    return report;
  }
};

std::string ModelPair::describe() const {
  return "f_plus=" + expr::to_string(f_plus()) + "; f_minus=" + expr::to_string(f_minus()) +
         "; R=" + fmt(R_);
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  os.precision(12);
  for (const auto& k : checks) {
    os << (k.passed ? "ok    " : (k.fatal ? "FAIL  " : "warn  ")) << k.name;
    if (!k.passed) {
      if (k.witness) os << "  [witness x = " << *k.witness << "]";
      if (!k.detail.empty()) os << "  " << k.detail;
    }
    os << '\n';
  }
  if (model) {
    os << "a_plus = " << model->a_plus() << ", a_minus = " << model->a_minus()
       << ", a = " << model->a() << ", f0 = " << model->f0() << ", c_est = " << model->c_est()
       << ", R = " << model->R() << '\n';
  }
  os << (ok() ? "model valid" : "model INVALID") << '\n';
  return os.str();
}

ValidationReport validate_model(std::string_view f_plus_text, std::string_view f_minus_text,
                                double R) {
  return ModelBuilder::run(f_plus_text, f_minus_text, R);
}

ModelPair build_model(std::string_view f_plus_text, std::string_view f_minus_text, double R) {
  ValidationReport report = validate_model(f_plus_text, f_minus_text, R);
  for (const auto& k : report.checks) {
    if (k.fatal && !k.passed) throw AssumptionError(k.name, k.witness.value_or(0.0), k.detail);
  }
  return std::move(*report.model);
}

namespace {

void require_in_domain(const ModelPair& model, double x) {
  if (!(std::fabs(x) <= model.R())) {
    throw PreconditionError("x = " + fmt(x) + " lies outside [-R, R]");
  }
}

}  // namespace

double drift_F(const ModelPair& model, double x) {
  require_in_domain(model, x);
  return model.drift(x);
}

double gap_G(const ModelPair& model, double x) {
  require_in_domain(model, x);
  return model.gap(x);
}

}  // namespace switchexit
