#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "semilab/bogolubov.hpp"

using namespace semilab;

namespace {
constexpr double kPi = std::numbers::pi;

struct Setup {
  double a;
  double span;
  ModeBasis mink;
  ModeBasis rind;
};

Setup make(double a, double span = 16.0, std::size_t cells = 256) {
  return {a, span, minkowski_continuum_basis(1e-4 * a, 1e-4 * a * std::exp(span), cells),
          rindler_basis(a, default_rindler_grid(a), span / a)};
}
}  // namespace

// Closed form: I_s(ν) = 2ν Γ(iν) e^{sπν/2}, so |I_s|² = 4πν e^{sπν} / sinh(πν).
TEST(WedgeOverlap, MatchesGammaFunctionModulus) {
  for (double nu : {0.05, 0.3, 1.0, 2.0, 4.0}) {
    for (int s : {+1, -1}) {
      const auto I = detail::wedge_overlap(nu, s, 1e-13);
      const double expected = 4.0 * kPi * nu * std::exp(s * kPi * nu) / std::sinh(kPi * nu);
      EXPECT_NEAR(std::norm(I.value), expected, 1e-10 * expected) << "nu=" << nu << " s=" << s;
      EXPECT_LT(I.error, 1e-9);
    }
  }
}

TEST(WedgeOverlap, RatioIsRealThermalFactor) {
  for (double nu : {0.1, 0.7, 2.5}) {
    const complex r = detail::wedge_overlap(nu, +1, 1e-13).value / detail::wedge_overlap(nu, -1, 1e-13).value;
    EXPECT_NEAR(r.real(), std::exp(kPi * nu), 1e-9 * std::exp(kPi * nu));
    EXPECT_NEAR(r.imag(), 0.0, 1e-9 * std::exp(kPi * nu));
  }
}

TEST(Bogolubov, PerModeWronskian) {
  const auto s = make(1.0);
  const auto B = bogolubov_coefficients(s.mink, s.rind);
  const double W = s.rind.window();
  for (std::size_t j = 0; j < B.rows(); j += 5)
    for (std::size_t k = 0; k < B.cols(); k += 17) {
      const double kk = s.mink.mode(k).k[0];
      const double expected = 1.0 / (s.a * W * kk);
      EXPECT_NEAR(std::norm(B.alpha(j, k)) - std::norm(B.beta(j, k)), expected, 1e-9 * expected);
    }
}

TEST(Bogolubov, ThermalSpectrumAndNormalization) {
  for (double a : {0.5, 1.0, 3.0}) {
    const auto s = make(a);
    const auto B = bogolubov_coefficients(s.mink, s.rind);
    for (std::size_t j = 0; j < B.rows(); ++j) {
      const double w = s.rind.mode(j).omega;
      const double planck = 1.0 / (std::exp(2.0 * kPi * w / a) - 1.0);
      EXPECT_NEAR(rindler_occupancy_in_vacuum(B, j), planck, 1e-8 * planck);
      EXPECT_NEAR(B.row_normalization(j), 1.0, 1e-10);
      const FockState bvac = rindler_annihilator_on_vacuum(B, j, s.mink);
      EXPECT_NEAR(bvac.norm_squared(), rindler_occupancy_in_vacuum(B, j), 1e-12 * planck);
      EXPECT_GT(bvac.norm_squared(), 0.0);
    }
  }
}

TEST(Bogolubov, PlanckHelper) {
  EXPECT_NEAR(unruh_planck_occupancy(1.0, 2.0 * kPi), 1.0 / (std::exp(1.0) - 1.0), 1e-15);
}

TEST(Bogolubov, RejectsMismatchedSpan) {
  const auto mink = minkowski_continuum_basis(1e-4, 1e-4 * std::exp(16.0), 128);
  const auto rind = rindler_basis(1.0, {0.5, 1.0}, 12.0);
  EXPECT_THROW(bogolubov_coefficients(mink, rind), DomainError);
}

TEST(Bogolubov, ReportsUnreachableQuadratureTolerance) {
  const auto s = make(1.0, 16.0, 16);
  BogolubovOptions opts;
  opts.max_error = 0.0;
  EXPECT_THROW(bogolubov_coefficients(s.mink, s.rind, opts), QuadratureError);
}

TEST(Bogolubov, IdenticalBoxQuantizationsAreTrivial) {
  const auto b = minkowski_basis(3.0, 1, 0.0, 3);
  const auto B = bogolubov_coefficients(b, b);
  for (std::size_t j = 0; j < B.rows(); ++j) {
    for (std::size_t k = 0; k < B.cols(); ++k) {
      EXPECT_NEAR(std::abs(B.alpha(j, k) - complex{j == k ? 1.0 : 0.0}), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(B.beta(j, k)), 0.0, 1e-12);
    }
    EXPECT_NEAR(B.row_normalization(j), 1.0, 1e-12);
  }
}

TEST(Bogolubov, UnsupportedPairings) {
  const auto box = minkowski_basis(3.0, 1, 1.0, 2);
  EXPECT_THROW(bogolubov_coefficients(box, box), DomainError);
  EXPECT_THROW(bogolubov_coefficients(eds_zero_mode_basis(1.0, 1.0), rindler_basis(1.0, {1.0}, 1.0)), DomainError);
  const auto B = bogolubov_coefficients(minkowski_basis(3.0, 1, 0.0, 1), minkowski_basis(3.0, 1, 0.0, 1));
  EXPECT_THROW(B.row_normalization(5), BasisMismatch);
}
