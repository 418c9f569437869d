#include "switchexit/model.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "switchexit/error.hpp"

namespace switchexit {
namespace {

ModelPair sinh_model() { return build_model("exp(x)", "-exp(-x)", 1.0); }
ModelPair linear_model() { return build_model("1+x", "-1+x", 1.0); }

TEST(BuildModel, SinhExemplar) {
  const ModelPair m = sinh_model();
  EXPECT_DOUBLE_EQ(m.a(), 1.0);
  EXPECT_DOUBLE_EQ(m.a_plus(), 1.0);
  EXPECT_DOUBLE_EQ(m.a_minus(), 1.0);
  EXPECT_DOUBLE_EQ(m.f0(), 1.0);
  EXPECT_DOUBLE_EQ(m.R(), 1.0);
  EXPECT_NEAR(m.c_est(), std::exp(1.0), 1e-12);
  EXPECT_EQ(m.drift_curvature(), 0.0);
}

TEST(BuildModel, LinearExemplar) {
  const ModelPair m = linear_model();
  EXPECT_EQ(m.a(), 1.0);
  EXPECT_EQ(m.f0(), 1.0);
  EXPECT_EQ(m.c_est(), 0.0);
  EXPECT_DOUBLE_EQ(drift_F(m, 0.3), 0.3);
  for (double x : {-1.0, -0.5, 0.0, 0.25, 1.0}) EXPECT_EQ(gap_G(m, x), 1.0);
}

TEST(BuildModel, NegativeAFails) {
  try {
    build_model("1+x", "-1-3*x", 1.0);
    FAIL() << "expected AssumptionError";
  } catch (const AssumptionError& e) {
    EXPECT_NE(e.assumption().find("a = F'(0) > 0"), std::string::npos);
    EXPECT_EQ(e.witness(), 0.0);
  }
}

TEST(BuildModel, ReportsEveryAssumption) {
  const ValidationReport ok = validate_model("exp(x)", "-exp(-x)", 1.0);
  EXPECT_TRUE(ok.ok());
  EXPECT_EQ(ok.checks.size(), 8u);
  for (const auto& k : ok.checks) EXPECT_TRUE(k.passed) << k.name;
  EXPECT_NE(ok.to_text().find("model valid"), std::string::npos);

  const ValidationReport bad = validate_model("1+x", "-1-3*x", 1.0);
  EXPECT_FALSE(bad.ok());
  EXPECT_NE(bad.to_text().find("FAIL"), std::string::npos);
}

TEST(BuildModel, OrientationAndSymmetry) {
  EXPECT_THROW(build_model("-1+x", "1+x", 1.0), AssumptionError);
  EXPECT_THROW(build_model("1+x", "-2+x", 1.0), AssumptionError);
  EXPECT_THROW(build_model("x", "x", 1.0), AssumptionError);
}

TEST(BuildModel, DriftSignWitness) {
  // F = x - x^3 changes sign at |x| = 1, inside R = 2.
  try {
    build_model("1 + x - x^3", "-1 + x - x^3", 2.0);
    FAIL() << "expected AssumptionError";
  } catch (const AssumptionError& e) {
    EXPECT_EQ(e.assumption(), "sgn F(x) = sgn x");
    EXPECT_GE(std::fabs(e.witness()), 1.0);
  }
  EXPECT_NO_THROW(build_model("1 + x - x^3", "-1 + x - x^3", 0.9));
}

TEST(BuildModel, GapWitness) {
  // G = 1 - x^2 vanishes at |x| = 1.
  try {
    build_model("1 + x - x^2", "-1 + x + x^2", 1.5);
    FAIL() << "expected AssumptionError";
  } catch (const AssumptionError& e) {
    EXPECT_EQ(e.assumption(), "G(x) > 0");
    EXPECT_GE(std::fabs(e.witness()), 1.0);
  }
}

TEST(BuildModel, DomainFailureOnSegment) {
  // log(2 + x) is undefined at x = -2 within R = 3.
  try {
    build_model("log(2+x) + 1 - log(2) + x", "-1 + x", 3.0);
    FAIL() << "expected AssumptionError";
  } catch (const AssumptionError& e) {
    EXPECT_EQ(e.assumption(), "fields evaluable on [-R, R]");
  }
}

TEST(BuildModel, InputErrors) {
  EXPECT_THROW(build_model("exp(x", "-1", 1.0), ParseError);
  EXPECT_THROW(build_model("1 + abs(x)", "-1 + x", 1.0), NotDifferentiableError);
  EXPECT_THROW(build_model("1+x", "-1+x", 0.0), PreconditionError);
  EXPECT_THROW(build_model("1+x", "-1+x", -1.0), PreconditionError);
}

TEST(BuildModel, AsymmetricSlopes) {
  const ModelPair m = build_model("2 + 3*x", "-2 - x", 0.9);
  EXPECT_EQ(m.a_plus(), 3.0);
  EXPECT_EQ(m.a_minus(), -1.0);
  EXPECT_EQ(m.a(), 1.0);
  EXPECT_EQ(m.f0(), 2.0);
}

TEST(DriftGap, SinhValues) {
  const ModelPair m = sinh_model();
  const double e = std::exp(1.0);
  EXPECT_NEAR(drift_F(m, 1.0), (e - 1.0 / e) / 2.0, 1e-15);
  EXPECT_NEAR(drift_F(m, 1.0), 1.1752011936438014569, 1e-15);
  EXPECT_EQ(gap_G(m, 0.0), 1.0);
  EXPECT_NEAR(gap_G(m, 1.0), 1.5430806348152437785, 1e-15);
  EXPECT_EQ(drift_F(m, 0.0), 0.0);
}

TEST(DriftGap, OutsideSegmentRejected) {
  const ModelPair m = sinh_model();
  EXPECT_THROW(drift_F(m, 1.0001), PreconditionError);
  EXPECT_THROW(gap_G(m, -2.0), PreconditionError);
}

TEST(DriftGap, ZeroAtOriginForValidModels) {
  for (auto [p, q] : {std::pair{"exp(x)", "-exp(-x)"}, std::pair{"1+x", "-1+x"},
                      std::pair{"2*cosh(x) + sinh(x)", "-2*cosh(x) + sinh(x)"},
                      std::pair{"3 + tanh(2*x)", "-3 + tanh(2*x) + x^2"}}) {
    const ModelPair m = build_model(p, q, 1.0);
    EXPECT_EQ(drift_F(m, 0.0), 0.0) << p;
  }
}

TEST(Properties, DecompositionIdentities) {
  const ModelPair m = build_model("exp(x) + 0.5*sin(x)", "-exp(-x) + 0.5*sin(x)", 1.0);
  for (double x : validation_grid(m.R())) {
    const double F = drift_F(m, x);
    const double G = gap_G(m, x);
    EXPECT_NEAR(m.field(+1, x), F + G, 1e-12);
    EXPECT_NEAR(m.field(-1, x), F - G, 1e-12);
  }
}

TEST(Properties, SymmetricConstructionGivesOddFEvenG) {
  // f_minus(x) = -f_plus(-x) for f_plus = exp(x) + 0.3 x^2.
  const ModelPair m = build_model("exp(x) + 0.3*x^2", "-exp(-x) - 0.3*x^2", 1.0);
  for (double x : validation_grid(m.R())) {
    EXPECT_NEAR(drift_F(m, -x), -drift_F(m, x), 1e-12);
    EXPECT_NEAR(gap_G(m, -x), gap_G(m, x), 1e-12);
  }
}

TEST(Properties, TaylorRemainderBound) {
  const ModelPair m = build_model("exp(x) + 0.2*sin(3*x)", "-exp(-x) + 0.2*sin(3*x)", 1.0);
  for (double x : validation_grid(m.R())) {
    for (int s : {+1, -1}) {
      const double a_s = s > 0 ? m.a_plus() : m.a_minus();
      const double rem = m.field(s, x) - s * m.f0() - a_s * x;
      EXPECT_LE(std::fabs(rem), 1.01 * m.c_est() * x * x / 2.0 + 1e-13) << x;
    }
  }
}

TEST(Properties, TaylorCheckIsNonFatal) {
  const ValidationReport report = validate_model("exp(x)", "-exp(-x)", 1.0);
  const auto& taylor = report.checks.back();
  EXPECT_FALSE(taylor.fatal);
}

TEST(ValidationGrid, Shape) {
  const auto g = validation_grid(2.0);
  EXPECT_EQ(g.front(), -2.0);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  // Refinement points that coincide with grid points are merged.
  EXPECT_GT(g.size(), 10001u);
  EXPECT_LE(g.size(), 10001u + 20u);
  EXPECT_TRUE(std::adjacent_find(g.begin(), g.end()) == g.end());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g[i], -g[g.size() - 1 - i]);
}

TEST(Describe, NamesBothFields) {
  const std::string d = sinh_model().describe();
  EXPECT_NE(d.find("f_plus="), std::string::npos);
  EXPECT_NE(d.find("f_minus="), std::string::npos);
  EXPECT_NE(d.find("R=1"), std::string::npos);
}

}  // namespace
}  // namespace switchexit
