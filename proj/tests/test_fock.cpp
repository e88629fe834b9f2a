#include <gtest/gtest.h>

#include <random>

#include "semilab/fock.hpp"

using namespace semilab;

namespace {

const BasisTag kTag{42, 3};

FockState random_state(std::mt19937_64& rng, std::size_t terms = 6) {
  std::uniform_int_distribution<std::uint32_t> occ(0, 3);
  std::normal_distribution<double> amp;
  FockState::TermMap map;
  for (std::size_t i = 0; i < terms; ++i)
    map[OccupationVector{{0u, occ(rng)}, {1u, occ(rng)}, {2u, occ(rng)}}] += complex{amp(rng), amp(rng)};
  return FockState(kTag, std::move(map));
}

double distance2(const FockState& a, const FockState& b) {
  return superpose({{complex{1.0}, a}, {complex{-1.0}, b}}, false).norm_squared();
}

}  // namespace

TEST(Occupation, RepeatedModesAccumulate) {
  const OccupationVector v{{1u, 1u}, {0u, 2u}, {1u, 1u}};
  EXPECT_EQ(v.count(0), 2u);
  EXPECT_EQ(v.count(1), 2u);
  EXPECT_EQ(v.count(2), 0u);
  EXPECT_EQ(v.total(), 4u);
  EXPECT_EQ(v.with_count(0, 0).count(0), 0u);
  EXPECT_EQ(v.with_count(0, 0).entries().size(), 1u);
}

TEST(Fock, VacuumIsUnitAndAnnihilated) {
  const FockState vac = new_vacuum(kTag);
  EXPECT_DOUBLE_EQ(vac.norm_squared(), 1.0);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_TRUE(apply_ladder(vac, k, Ladder::annihilate).is_zero());
}

TEST(Fock, CreationBuildsNormalizedNumberStates) {
  FockState s = new_vacuum(kTag);
  for (int n = 1; n <= 4; ++n) {
    s = apply_ladder(s, 1, Ladder::create);
    // (a†)^n |0⟩ = √(n!) |n⟩
    EXPECT_NEAR(number_expectation(s.normalized(), 1), n, 1e-12);
  }
  EXPECT_NEAR(s.norm_squared(), 24.0, 1e-12);
}

TEST(Fock, CommutatorIdentityOnRandomStates) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const FockState psi = random_state(rng);
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        const FockState ajak = apply_ladder(apply_ladder(psi, k, Ladder::create), j, Ladder::annihilate);
        const FockState akaj = apply_ladder(apply_ladder(psi, j, Ladder::annihilate), k, Ladder::create);
        const FockState comm = superpose({{complex{1.0}, ajak}, {complex{-1.0}, akaj}}, false);
        const FockState expected = j == k ? psi : FockState(kTag);
        EXPECT_LT(distance2(comm, expected), 1e-20 * (1.0 + psi.norm_squared()));
      }
  }
}

TEST(Fock, AnnihilatorsCommuteAcrossModes) {
  std::mt19937_64 rng(11);
  const FockState psi = random_state(rng);
  const auto ab = apply_ladder(apply_ladder(psi, 0, Ladder::annihilate), 2, Ladder::annihilate);
  const auto ba = apply_ladder(apply_ladder(psi, 2, Ladder::annihilate), 0, Ladder::annihilate);
  EXPECT_LT(distance2(ab, ba), 1e-24);
}

TEST(Fock, LadderIsLinearOnSuperpositions) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const FockState a = random_state(rng), b = random_state(rng);
    const complex alpha{0.3, -1.2}, beta{-0.7, 0.4};
    const FockState lhs = apply_ladder(superpose({{alpha, a}, {beta, b}}, false), 1, Ladder::create);
    const FockState rhs = superpose({{alpha, apply_ladder(a, 1, Ladder::create)},
                                     {beta, apply_ladder(b, 1, Ladder::create)}},
                                    false);
    EXPECT_LT(distance2(lhs, rhs), 1e-20);
    const std::vector<complex> g{{0.5, 0.1}, {0.0, -2.0}, {1.5, 0.0}};
    const FockState l2 = apply_annihilators(superpose({{alpha, a}, {beta, b}}, false), g);
    const FockState r2 =
        superpose({{alpha, apply_annihilators(a, g)}, {beta, apply_annihilators(b, g)}}, false);
    EXPECT_LT(distance2(l2, r2), 1e-20);
  }
}

TEST(Fock, InnerProductIsSesquilinear) {
  std::mt19937_64 rng(5);
  const FockState a = random_state(rng), b = random_state(rng);
  const complex c{0.2, 0.9};
  EXPECT_NEAR(std::abs(inner(a, b.scaled(c)) - c * inner(a, b)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(inner(a.scaled(c), b) - std::conj(c) * inner(a, b)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(inner(a, b) - std::conj(inner(b, a))), 0.0, 1e-12);
}

TEST(Fock, Errors) {
  EXPECT_THROW(FockState(kTag).normalized(), ZeroNormError);
  EXPECT_THROW(apply_ladder(new_vacuum(kTag), 3, Ladder::create), BasisMismatch);
  EXPECT_THROW(inner(new_vacuum(kTag), new_vacuum(BasisTag{43, 3})), BasisMismatch);
  EXPECT_THROW(superpose({{complex{1.0}, new_vacuum(kTag)}, {complex{1.0}, new_vacuum(BasisTag{1, 3})}}, false),
               BasisMismatch);
}

TEST(Fock, TinyAmplitudesAreDropped) {
  const FockState s(kTag, {{OccupationVector{}, complex{1e-17, 0.0}}, {OccupationVector{{0u, 1u}}, complex{1.0}}});
  EXPECT_EQ(s.terms().size(), 1u);
  EXPECT_EQ(s.occupied_modes(), std::vector<std::size_t>{0});
}
