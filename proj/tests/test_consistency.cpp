#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "semilab/consistency.hpp"

using namespace semilab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Residual, MinkowskiVacuumIsExactlyZero) {
  const auto b = minkowski_basis(3.0, 2, 1.0, 2);
  const auto r = residual(SpacetimeBackend::minkowski(2, 3.0), new_vacuum(b), b,
                          {Event{0.0, {0.0, 0.0}}, Event{1.0, {1.0, 2.0}}});
  EXPECT_EQ(r.global_max, 0.0);
  EXPECT_EQ(r.per_event.size(), 2u);
  EXPECT_THROW(residual(SpacetimeBackend::minkowski(2, 3.0), new_vacuum(b), b, {}), DomainError);
}

TEST(Residual, EdsCriticalMassLeavesQuantumRemainder) {
  // With m = V0/6π the m/(V0 t²) term cancels G_00; what remains is
  // 8π/(2 V0 m t⁴) = 24π²/(V0² t⁴) in T_00 and 24π² t^{4/3}/(V0² t⁴) in T_ii.
  for (double V0 : {100.0, 600.0 * kPi}) {
    for (double t : {1.0, 2.0, 4.0}) {
      const double t4 = t * t * t * t;
      const double expected = 24.0 * kPi * kPi * std::pow(t, 4.0 / 3.0) / (V0 * V0 * t4);
      EXPECT_NEAR(eds_residual_at(V0, std::nullopt, t), expected, 1e-8 * expected);
    }
  }
}

TEST(Scaling, PowerLawSlope) {
  const auto st = scaling_study({1.0, 10.0, 100.0, 1000.0}, [](double v) { return 3.0 / (v * v); });
  ASSERT_TRUE(st.slope.has_value());
  EXPECT_NEAR(*st.slope, -2.0, 1e-12);
  EXPECT_EQ(st.rows.size(), 4u);
}

TEST(Scaling, EdsResidualFallsAsInverseSquareVolume) {
  const auto st = scaling_study({100.0, 1000.0, 10000.0}, [](double V0) { return eds_residual_at(V0, std::nullopt, 1.0); });
  ASSERT_TRUE(st.slope.has_value());
  EXPECT_NEAR(*st.slope, -2.0, 1e-6);
}

TEST(Scaling, ZeroResidualsHaveNoSlope) {
  const auto st = scaling_study({1.0, 2.0, 3.0}, [](double) { return 0.0; });
  EXPECT_FALSE(st.slope.has_value());
  EXPECT_EQ(st.slope_label, "undefined(zero)");
}

TEST(Scaling, Errors) {
  const auto f = [](double v) { return v; };
  EXPECT_THROW(scaling_study({1.0, 2.0}, f), DomainError);
  EXPECT_THROW(scaling_study({1.0, 3.0, 2.0}, f), DomainError);
  EXPECT_THROW(scaling_study({0.0, 1.0, 2.0}, f), DomainError);
}

TEST(Fit, QuadraticMinimum) {
  const auto r = fit_parameter([](double x) { return (x - 3.0) * (x - 3.0) + 1.0; }, 0.0, 10.0, 1e-8);
  EXPECT_NEAR(r.best, 3.0, 1e-7);
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
  EXPECT_FALSE(r.at_boundary);
}

TEST(Fit, BoundaryMinimumIsFlagged) {
  const auto r = fit_parameter([](double x) { return x; }, 2.0, 5.0, 1e-8);
  EXPECT_DOUBLE_EQ(r.best, 2.0);
  EXPECT_TRUE(r.at_boundary);
}

TEST(Fit, NonFiniteObjectiveAborts) {
  EXPECT_THROW(fit_parameter([](double x) { return x > 1.0 ? std::numeric_limits<double>::quiet_NaN() : x; }, 0.0,
                             5.0, 1e-6),
               DomainError);
  EXPECT_THROW(fit_parameter([](double x) { return x; }, 1.0, 1.0, 1e-6), DomainError);
}

TEST(Fit, RecoversCriticalEdsMass) {
  for (double V0 : {300.0, 600.0 * kPi}) {
    const auto r = fit_parameter([&](double m) { return eds_residual_at(V0, m, 1.0); }, 1.0, 1000.0, 1e-7);
    EXPECT_NEAR(r.best, V0 / (6.0 * kPi), 1e-3 * V0 / (6.0 * kPi));
  }
}
