#pragma once

// Vacuum-subtracted stress-energy {Ψ|T_μν|Ψ} of a free real scalar.
//
// For free fields the vacuum subtraction equals normal ordering, so every
// component is a sum of normal-ordered quadratic forms ⟨Ψ| :A B: |Ψ⟩ with
// A = Σ_k (g_k a_k + ḡ_k a_k†). From ℒ = ½(g^{μν} ∂_μφ ∂_νφ − m²φ²):
//   T_μν = ∂_μφ ∂_νφ − g_μν ℒ

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "semilab/errors.hpp"
#include "semilab/fock.hpp"
#include "semilab/modes.hpp"
#include "semilab/spacetime.hpp"

namespace semilab {

/// Per-mode coefficient g_k of a_k in a Hermitian field-like operator.
struct QuadraticCoefficients {
  std::vector<complex> g;
};

namespace detail {

/// ⟨ψ| :A B: |ψ⟩ from the annihilation parts A⁻ψ, B⁻ψ and double
/// annihilations A⁻B⁻ψ, B⁻A⁻ψ:
///   :AB: = A⁻B⁻ + A⁺B⁻ + B⁺A⁻ + A⁺B⁺,  (A⁺)† = A⁻.
inline complex normal_ordered(const FockState& psi, const FockState& a_psi, const FockState& b_psi,
                              const FockState& ab_psi, const FockState& ba_psi) {
  return inner(psi, ab_psi) + inner(a_psi, b_psi) + inner(b_psi, a_psi) + std::conj(inner(psi, ba_psi));
}

}  // namespace detail

inline complex quadratic_expectation(const FockState& state, const QuadraticCoefficients& g,
                                     const QuadraticCoefficients& h) {
  if (g.g.size() != state.basis().mode_count || h.g.size() != state.basis().mode_count)
    throw BasisMismatch("quadratic coefficients are not aligned with the state's basis");
  const FockState a_psi = apply_annihilators(state, g.g);
  const FockState b_psi = apply_annihilators(state, h.g);
  return detail::normal_ordered(state, a_psi, b_psi, apply_annihilators(b_psi, g.g),
                                apply_annihilators(a_psi, h.g));
}

struct StressSample {
  Event event;
  TensorSample components;
};

namespace detail {

inline void require_state_on(const FockState& state, const ModeBasis& basis) {
  if (!(state.basis() == basis.tag())) throw BasisMismatch("state does not live over the given mode basis");
}

/// One- and two-body correlations of a state over its occupied modes:
/// ρ_kq = ⟨a_k† a_q⟩ and κ_kq = ⟨a_k a_q⟩. Any normal-ordered quadratic
/// expectation is a contraction of these with the field coefficients.
struct Correlations {
  std::vector<std::size_t> modes;
  std::vector<complex> rho;
  std::vector<complex> kappa;

  explicit Correlations(const FockState& state) : modes(state.occupied_modes()) {
    const std::size_t n = modes.size();
    rho.resize(n * n);
    kappa.resize(n * n);
    std::vector<FockState> lowered;
    lowered.reserve(n);
    for (std::size_t k : modes) lowered.push_back(apply_ladder(state, k, Ladder::annihilate));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        rho[i * n + j] = inner(lowered[i], lowered[j]);
        kappa[i * n + j] = inner(state, apply_ladder(lowered[j], modes[i], Ladder::annihilate));
      }
  }

  /// ⟨:AB:⟩ with A⁻ = Σ_i ga_i a_{modes[i]}, B⁻ = Σ_i gb_i a_{modes[i]}.
  double normal_ordered(const complex* ga, const complex* gb) const {
    const std::size_t n = modes.size();
    complex pair{}, mixed{};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        pair += ga[i] * gb[j] * kappa[i * n + j];
        mixed += (std::conj(ga[i]) * gb[j] + std::conj(gb[i]) * ga[j]) * rho[i * n + j];
      }
    return (pair + std::conj(pair) + mixed).real();
  }
};

/// T_μν in the basis's native coordinates (inertial for box modes, comoving for EdS).
/// With `energy_only`, only T_00 is filled in.
inline TensorSample native_stress(const Correlations& c, const ModeBasis& basis, const SpacetimeBackend& native,
                                  const Event& event, bool energy_only = false) {
  const std::size_t d = static_cast<std::size_t>(basis.dimension());
  const std::size_t n = c.modes.size();
  const std::size_t comps = d + 1;

  // coeff[μ] holds ∂_μ f over the occupied modes; coeff[comps] holds f.
  std::vector<std::vector<complex>> coeff(comps + 1, std::vector<complex>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const ModeJet jet = mode_jet(basis, c.modes[i], event);
    for (std::size_t mu = 0; mu < comps; ++mu) coeff[mu][i] = jet.d[mu];
    coeff[comps][i] = jet.value;
  }
  auto q = [&](std::size_t mu, std::size_t nu) { return c.normal_ordered(coeff[mu].data(), coeff[nu].data()); };

  const TensorSample g = metric(native, event);
  std::vector<double> q_cache(comps * comps);
  double trace = 0.0;  // g^{μμ} ⟨:∂_μφ ∂_μφ:⟩ (diagonal metrics)
  for (std::size_t mu = 0; mu < comps; ++mu) {
    for (std::size_t nu = mu; nu < (energy_only ? mu + 1 : comps); ++nu) q_cache[mu * comps + nu] = q(mu, nu);
    trace += q_cache[mu * comps + mu] / g(mu, mu);
  }
  const double m = basis.mass();
  const double lagrangian = 0.5 * (trace - m * m * q(comps, comps));

  TensorSample T(static_cast<int>(d));
  if (energy_only) {
    T.set(0, 0, q_cache[0] - g(0, 0) * lagrangian);
    return T;
  }
  for (std::size_t mu = 0; mu < comps; ++mu)
    for (std::size_t nu = mu; nu < comps; ++nu) T.set(mu, nu, q_cache[mu * comps + nu] - g(mu, nu) * lagrangian);
  return T;
}

}  // namespace detail

/// {Ψ|T_μν|Ψ} at one event of `backend`.
///
/// Box modes on a Minkowski backend and the EdS zero mode on an EdS backend
/// are evaluated directly. On a Rindler backend the event is (τ, ξ) and the
/// inertial tensor of a 1-D box basis is pulled back through the wedge chart.
inline StressSample stress_sample(const FockState& state, const ModeBasis& basis, const SpacetimeBackend& backend,
                                  const Event& event) {
  detail::require_state_on(state, basis);
  backend.validate(event);
  if (!basis.lives_on(backend)) throw BasisMismatch("mode basis does not live on this backend");

  switch (backend.kind()) {
    case BackendKind::minkowski:
      if (basis.kind() != BasisKind::minkowski_box)
        throw DomainError("stress samples on Minkowski need a box-mode basis");
      return {event, detail::native_stress(detail::Correlations(state), basis, backend, event)};
    case BackendKind::einstein_de_sitter:
      return {event, detail::native_stress(detail::Correlations(state), basis, backend, event)};
    case BackendKind::rindler2d: {
      const double a = backend.acceleration();
      const Event inertial = rindler_to_inertial(a, event);
      const auto flat = SpacetimeBackend::minkowski(1, basis.box_side());
      const TensorSample T = detail::native_stress(detail::Correlations(state), basis, flat, inertial);
      // J[a][μ] = ∂x^μ/∂y^a with y = (τ, ξ), x = (t, x).
      const double J[2][2] = {{a * inertial.x[0], a * inertial.t}, {a * inertial.t, a * inertial.x[0]}};
      TensorSample out(1);
      for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t r = p; r < 2; ++r) {
          double s = 0.0;
          for (std::size_t mu = 0; mu < 2; ++mu)
            for (std::size_t nu = 0; nu < 2; ++nu) s += J[p][mu] * J[r][nu] * T(mu, nu);
          out.set(p, r, s);
        }
      return {event, out};
    }
  }
  throw DomainError("unknown backend");
}

/// Σ_k ω_k ⟨N_k⟩ over a box basis.
inline double total_energy(const FockState& state, const ModeBasis& basis) {
  detail::require_state_on(state, basis);
  if (basis.kind() != BasisKind::minkowski_box) throw DomainError("total_energy needs a Minkowski box basis");
  double e = 0.0;
  for (std::size_t k : state.occupied_modes()) e += basis.mode(k).omega * number_expectation(state, k);
  return e;
}

/// Riemann sum of T_00 over a uniform periodic lattice at time t.
inline double lattice_energy(const FockState& state, const ModeBasis& basis, double t, std::size_t points_per_axis) {
  detail::require_state_on(state, basis);
  if (basis.kind() != BasisKind::minkowski_box) throw DomainError("lattice_energy needs a Minkowski box basis");
  if (points_per_axis == 0) throw DomainError("lattice needs at least one point per axis");
  const int d = basis.dimension();
  const double L = basis.box_side();
  const double h = L / static_cast<double>(points_per_axis);
  const auto backend = SpacetimeBackend::minkowski(d, L);

  const detail::Correlations corr(state);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  double sum = 0.0;
  Event e{t, std::vector<double>(static_cast<std::size_t>(d))};
  while (true) {
    for (std::size_t i = 0; i < idx.size(); ++i) e.x[i] = h * static_cast<double>(idx[i]);
    sum += detail::native_stress(corr, basis, backend, e, true)(0, 0);
    std::size_t axis = 0;
    while (axis < idx.size() && idx[axis] + 1 == points_per_axis) idx[axis++] = 0;
    if (axis == idx.size()) break;
    ++idx[axis];
  }
  return sum * std::pow(h, d);
}

/// (1/N) Σ_k e^{−ik·x0}/√(2ω_k) |k⟩ over every mode of a box basis.
inline FockState wavepacket_state(const ModeBasis& basis, const std::vector<double>& x0) {
  if (basis.kind() != BasisKind::minkowski_box) throw DomainError("wavepacket needs a Minkowski box basis");
  if (basis.size() == 0) throw DomainError("wavepacket needs a nonempty basis");
  if (x0.size() != static_cast<std::size_t>(basis.dimension()))
    throw DomainError("wavepacket centre has the wrong dimension");
  for (double c : x0)
    if (!(c >= 0.0 && c < basis.box_side())) throw DomainError("wavepacket centre must lie in [0, L)");
  FockState::TermMap terms;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Mode& m = basis.mode(k);
    double phase = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i) phase -= m.k[i] * x0[i];
    terms.emplace(OccupationVector{{static_cast<std::uint32_t>(k), 1u}},
                  std::polar(1.0 / std::sqrt(2.0 * m.omega), phase));
  }
  return FockState(basis.tag(), std::move(terms)).normalized();
}

/// m/(V0 t²) + 1/(V0 m t⁴), the EdS energy density as usually quoted for a0†|0⟩.
/// The normal-ordered operator value has 1/(2 V0 m t⁴) as the second term.
inline double eds_closed_form_energy_density(double t, double mass, double comoving_volume) {
  return mass / (comoving_volume * t * t) + 1.0 / (comoving_volume * mass * t * t * t * t);
}

/// Single-quantum EdS state a0†|0_M⟩.
inline FockState eds_single_quantum(const ModeBasis& basis) {
  if (basis.kind() != BasisKind::eds_zero_mode) throw DomainError("needs the EdS zero-mode basis");
  return apply_ladder(new_vacuum(basis), 0, Ladder::create);
}

/// Normalized |quanta⟩ in the box mode with lattice label n.
inline FockState box_momentum_state(const ModeBasis& basis, const std::vector<int>& n, std::uint32_t quanta = 1) {
  const std::size_t k = basis.find(n);
  if (k == basis.size()) throw BasisMismatch("mode label not present in basis");
  return FockState::basis_vector(basis.tag(), OccupationVector{{static_cast<std::uint32_t>(k), quanta}});
}

}  // namespace semilab
