#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "semilab/modes.hpp"

using namespace semilab;

namespace {

// Centred second derivative of f along coordinate `axis` (0 = t).
complex second_derivative(const ModeBasis& b, std::size_t k, Event e, int axis, double h) {
  auto at = [&](double s) {
    Event p = e;
    (axis == 0 ? p.t : p.x[static_cast<std::size_t>(axis - 1)]) += s;
    return mode_value(b, k, p);
  };
  return (at(h) - 2.0 * at(0.0) + at(-h)) / (h * h);
}

complex first_derivative(const ModeBasis& b, std::size_t k, Event e, int axis, double h) {
  auto at = [&](double s) {
    Event p = e;
    (axis == 0 ? p.t : p.x[static_cast<std::size_t>(axis - 1)]) += s;
    return mode_value(b, k, p);
  };
  return (at(h) - at(-h)) / (2.0 * h);
}

}  // namespace

TEST(BoxBasis, SizesAndDispersion) {
  EXPECT_EQ(minkowski_basis(1.0, 1, 1.0, 2).size(), 5u);
  EXPECT_EQ(minkowski_basis(1.0, 1, 0.0, 2).size(), 4u);
  EXPECT_EQ(minkowski_basis(1.0, 3, 1.0, 2).size(), 125u);
  EXPECT_EQ(minkowski_basis(1.0, 2, 2.0, 0).size(), 1u);
  const auto b = minkowski_basis(3.0, 2, 0.5, 3);
  for (const auto& m : b.modes()) {
    double k2 = 0.0;
    for (std::size_t i = 0; i < m.k.size(); ++i) {
      EXPECT_DOUBLE_EQ(m.k[i], 2.0 * std::numbers::pi * m.n[i] / 3.0);
      k2 += m.k[i] * m.k[i];
    }
    EXPECT_NEAR(m.omega * m.omega, k2 + 0.25, 1e-12);
  }
  EXPECT_EQ(b.find({-3, 2}) < b.size(), true);
  EXPECT_EQ(b.find({4, 0}), b.size());
}

TEST(BoxBasis, Errors) {
  EXPECT_THROW(minkowski_basis(0.0, 1, 1.0, 1), DomainError);
  EXPECT_THROW(minkowski_basis(1.0, 4, 1.0, 1), DomainError);
  EXPECT_THROW(minkowski_basis(1.0, 1, -1.0, 1), DomainError);
  EXPECT_THROW(minkowski_basis(1.0, 1, 1.0, -1), DomainError);
  EXPECT_THROW(minkowski_basis(1.0, 1, 0.0, 0), DomainError);
}

TEST(BoxBasis, TagsDistinguishBases) {
  EXPECT_EQ(minkowski_basis(2.0, 1, 1.0, 2).tag(), minkowski_basis(2.0, 1, 1.0, 2).tag());
  EXPECT_FALSE(minkowski_basis(2.0, 1, 1.0, 2).tag() == minkowski_basis(2.5, 1, 1.0, 2).tag());
}

TEST(BoxModes, KleinGordonResidual) {
  const auto b = minkowski_basis(4.0, 3, 1.3, 2);
  const Event e{0.7, {0.3, 1.1, 2.9}};
  const double h = 1e-4;
  for (std::size_t k = 0; k < b.size(); k += 7) {
    complex box = second_derivative(b, k, e, 0, h);
    for (int i = 1; i <= 3; ++i) box -= second_derivative(b, k, e, i, h);
    const complex f = mode_value(b, k, e);
    const double scale = b.mode(k).omega * b.mode(k).omega * std::abs(f);
    EXPECT_LT(std::abs(box + 1.3 * 1.3 * f) / scale, 1e-6) << "mode " << k;
  }
}

TEST(BoxModes, JetMatchesFiniteDifferences) {
  const auto b = minkowski_basis(5.0, 2, 0.4, 2);
  const Event e{1.3, {0.2, 3.3}};
  for (std::size_t k = 0; k < b.size(); ++k) {
    const ModeJet j = mode_jet(b, k, e);
    for (int mu = 0; mu < 3; ++mu)
      EXPECT_LT(std::abs(j.d[static_cast<std::size_t>(mu)] - first_derivative(b, k, e, mu, 1e-5)), 1e-8);
  }
}

TEST(BoxModes, KleinGordonProductIsOrthonormal) {
  const double L = 7.0;
  const auto b = minkowski_basis(L, 1, 0.8, 3);
  const std::size_t N = 64;  // periodic trapezoid is exact for these band-limited integrands
  auto product = [&](std::size_t p, bool conj_p, std::size_t q) {
    complex s{};
    for (std::size_t i = 0; i < N; ++i) {
      const Event e{0.4, {L * static_cast<double>(i) / N}};
      ModeJet f = mode_jet(b, p, e);
      if (conj_p) {
        f.value = std::conj(f.value);
        f.d[0] = std::conj(f.d[0]);
      }
      const ModeJet g = mode_jet(b, q, e);
      s += complex{0.0, 1.0} * (std::conj(f.value) * g.d[0] - std::conj(f.d[0]) * g.value);
    }
    return s * (L / N);
  };
  for (std::size_t p = 0; p < b.size(); ++p)
    for (std::size_t q = 0; q < b.size(); ++q) {
      EXPECT_LT(std::abs(product(p, false, q) - complex{p == q ? 1.0 : 0.0}), 1e-12);
      EXPECT_LT(std::abs(product(p, true, q)), 1e-12);
    }
}

TEST(BoxModes, EqualTimeCommutatorIsLatticeDelta) {
  // [φ(x), π(y)] = Σ_k (f_k(x) ∂_t f̄_k(y) − f̄_k(x) ∂_t f_k(y)) = i δ_ij / Δx on the
  // N = 2 n_max + 1 point lattice.
  const double L = 3.0;
  const int n_max = 4;
  const auto b = minkowski_basis(L, 1, 1.0, n_max);
  const std::size_t N = 2 * n_max + 1;
  const double dx = L / static_cast<double>(N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      complex c{};
      for (std::size_t k = 0; k < b.size(); ++k) {
        const ModeJet fx = mode_jet(b, k, Event{0.0, {i * dx}});
        const ModeJet fy = mode_jet(b, k, Event{0.0, {j * dx}});
        c += fx.value * std::conj(fy.d[0]) - std::conj(fx.value) * fy.d[0];
      }
      EXPECT_LT(std::abs(c - complex{0.0, i == j ? 1.0 / dx : 0.0}), 1e-12);
    }
}

TEST(EdsMode, SolvesFriedmannKleinGordon) {
  // f̈ + 3H ḟ + m² f = 0 with H = 2/(3t)
  const double m = 3.0, V0 = 2.0;
  const auto b = eds_zero_mode_basis(m, V0);
  for (double t : {0.5, 1.0, 2.5}) {
    const Event e{t, {0.0, 0.0, 0.0}};
    const double h = 1e-4;
    const complex fdd = second_derivative(b, 0, e, 0, h);
    const complex fd = first_derivative(b, 0, e, 0, h);
    const complex f = mode_value(b, 0, e);
    EXPECT_LT(std::abs(fdd + 2.0 / t * fd + m * m * f) / (m * m * std::abs(f)), 1e-6);
    EXPECT_LT(std::abs(mode_jet(b, 0, e).d[0] - fd), 1e-7 * std::abs(fd));
  }
}

TEST(EdsMode, WronskianNormalization) {
  // i a³ V0 (f̄ ḟ − ∂_t f̄ f) = 1, a³ = t²
  const double m = 0.7, V0 = 5.0;
  const auto b = eds_zero_mode_basis(m, V0);
  for (double t : {0.3, 1.0, 4.0}) {
    const ModeJet j = mode_jet(b, 0, Event{t, {0.0, 0.0, 0.0}});
    const complex w = complex{0.0, 1.0} * t * t * V0 * (std::conj(j.value) * j.d[0] - std::conj(j.d[0]) * j.value);
    EXPECT_NEAR(w.real(), 1.0, 1e-13);
    EXPECT_NEAR(w.imag(), 0.0, 1e-13);
  }
  EXPECT_THROW(eds_k0_mode(0.0, m, V0), DomainError);
  EXPECT_THROW(eds_zero_mode_basis(0.0, V0), DomainError);
}

TEST(RindlerModes, WaveEquationResidual) {
  // □ = e^{−2aξ}(∂_τ² − ∂_ξ²)
  const double a = 1.5;
  const auto b = rindler_basis(a, default_rindler_grid(a), 10.0);
  const Event e{0.2, {-0.4}};
  for (std::size_t k = 0; k < b.size(); ++k) {
    const complex box = second_derivative(b, k, e, 0, 1e-4) - second_derivative(b, k, e, 1, 1e-4);
    const double w = b.mode(k).omega;
    EXPECT_LT(std::abs(box) / (w * w * std::abs(mode_value(b, k, e))), 1e-6);
  }
}

TEST(RindlerModes, ChartCoversTheRightWedge) {
  const double a = 0.5;
  for (double tau : {-1.0, 0.0, 2.0})
    for (double xi : {-1.0, 0.0, 1.5}) {
      const Event in = rindler_to_inertial(a, Event{tau, {xi}});
      EXPECT_GT(in.x[0], std::abs(in.t));
      EXPECT_NEAR(in.x[0] * in.x[0] - in.t * in.t, std::exp(2 * a * xi) / (a * a), 1e-10);
    }
}

TEST(RindlerModes, GridValidation) {
  EXPECT_THROW(rindler_basis(1.0, {}, 1.0), DomainError);
  EXPECT_THROW(rindler_basis(1.0, {0.5, 0.5}, 1.0), DomainError);
  EXPECT_THROW(rindler_basis(1.0, {-0.5}, 1.0), DomainError);
  EXPECT_THROW(rindler_basis(0.0, {0.5}, 1.0), DomainError);
  EXPECT_THROW(rindler_basis(1.0, {0.5}, 0.0), DomainError);
  EXPECT_EQ(default_rindler_grid(2.0).size(), 16u);
  EXPECT_DOUBLE_EQ(default_rindler_grid(2.0).front(), 0.2);
  EXPECT_DOUBLE_EQ(default_rindler_grid(2.0).back(), 6.0);
}

TEST(ContinuumBasis, LogCellsAndWeights) {
  const auto b = minkowski_continuum_basis(0.01, 100.0, 40);
  const double ds = std::log(1e4) / 40.0;
  double sum = 0.0;
  for (const auto& m : b.modes()) {
    EXPECT_NEAR(m.weight, m.k[0] * ds, 1e-15 * m.k[0]);
    sum += m.weight;
  }
  // Midpoint rule for ∫ dk over [k_min, k_max] in ln k.
  EXPECT_NEAR(sum, 100.0 - 0.01, 5e-3 * 100.0);
  EXPECT_THROW(minkowski_continuum_basis(1.0, 1.0, 4), DomainError);
}

TEST(Basis, LivesOnBackend) {
  EXPECT_TRUE(minkowski_basis(2.0, 3, 1.0, 1).lives_on(SpacetimeBackend::minkowski(3, 2.0)));
  EXPECT_FALSE(minkowski_basis(2.0, 3, 1.0, 1).lives_on(SpacetimeBackend::minkowski(3, 3.0)));
  EXPECT_FALSE(minkowski_basis(2.0, 3, 1.0, 1).lives_on(SpacetimeBackend::einstein_de_sitter(1.0)));
  EXPECT_TRUE(eds_zero_mode_basis(1.0, 4.0).lives_on(SpacetimeBackend::einstein_de_sitter(4.0)));
  EXPECT_TRUE(rindler_basis(1.0, {1.0}, 1.0).lives_on(SpacetimeBackend::rindler2d(1.0)));
  EXPECT_TRUE(minkowski_basis(2.0, 1, 1.0, 1).lives_on(SpacetimeBackend::rindler2d(1.0)));
}
