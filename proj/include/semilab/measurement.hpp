#pragma once

// State projection onto admissible branches.
//
// A measurement replaces the world state by one branch C_i drawn with Born
// weight |⟨C_i|Ψ⟩|² / Σ_j |⟨C_j|Ψ⟩|². Projection may also be restricted to
// branches whose energy density agrees with the pre-measurement one at every
// probe outside the future light cone of the measurement event.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "semilab/errors.hpp"
#include "semilab/fock.hpp"
#include "semilab/spacetime.hpp"

namespace semilab {

using EnergyProfile = std::function<double(const Event&)>;

struct Branch {
  FockState state;
  std::string label;
  EnergyProfile energy_profile;
};

/// Orthonormal admissible branches; construction validates orthonormality.
class BranchSet {
 public:
  explicit BranchSet(std::vector<Branch> branches, double tolerance = 1e-10) : branches_(std::move(branches)) {
    if (branches_.empty()) throw DomainError("branch set is empty");
    for (std::size_t i = 0; i < branches_.size(); ++i) {
      require_same_basis(branches_[0].state, branches_[i].state);
      if (std::abs(branches_[i].state.norm_squared() - 1.0) > tolerance)
        throw DomainError("branch '" + branches_[i].label + "' is not normalized");
      if (!branches_[i].energy_profile) throw DomainError("branch '" + branches_[i].label + "' has no energy profile");
      for (std::size_t j = 0; j < i; ++j)
        if (std::abs(inner(branches_[j].state, branches_[i].state)) >= tolerance)
          throw DomainError("branches '" + branches_[j].label + "' and '" + branches_[i].label +
                            "' are not orthogonal");
    }
  }

  std::size_t size() const noexcept { return branches_.size(); }
  const Branch& operator[](std::size_t i) const { return branches_.at(i); }
  const std::vector<Branch>& branches() const noexcept { return branches_; }

 private:
  std::vector<Branch> branches_;
};

struct MeasurementEvent {
  Event event;
  BranchSet branches;
};

inline std::vector<double> born_probabilities(const FockState& state, const BranchSet& set) {
  std::vector<double> p;
  p.reserve(set.size());
  double total = 0.0;
  for (const auto& b : set.branches()) {
    p.push_back(std::norm(inner(b.state, state)));
    total += p.back();
  }
  if (!(total > 1e-300)) throw ZeroNormError("state is orthogonal to every admissible branch");
  for (double& v : p) v /= total;
  return p;
}

// --- counter-based randomness -------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of trial `index` under `master`; trials are order-independent.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(master ^ splitmix64(index));
}

/// Uniform double in [0, 1) from the top 53 bits of a mixed seed.
inline double uniform01(std::uint64_t seed) noexcept {
  return static_cast<double>(splitmix64(seed) >> 11) * 0x1.0p-53;
}

inline std::size_t sample_index(const std::vector<double>& probabilities, double u) {
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    last_positive = i;
    acc += probabilities[i];
    if (u < acc) return i;
  }
  return last_positive;  // u landed in rounding slack at the top
}

struct Projection {
  std::size_t index = 0;
  double probability = 0.0;
  FockState post_state;
};

inline Projection project(const FockState& state, const MeasurementEvent& mev, std::uint64_t seed) {
  const auto p = born_probabilities(state, mev.branches);
  const std::size_t i = sample_index(p, uniform01(seed));
  return Projection{i, p[i], mev.branches[i].state};
}

// --- energy profiles and the light-cone constraint ----------------------

/// Branch-diagonal energy density Σ_i p_i E_i(x) of `state`.
inline EnergyProfile state_energy_profile(const FockState& state, const BranchSet& set) {
  const auto p = born_probabilities(state, set);
  std::vector<EnergyProfile> profiles;
  for (const auto& b : set.branches()) profiles.push_back(b.energy_profile);
  return [p, profiles](const Event& e) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] > 0.0) s += p[i] * profiles[i](e);
    return s;
  };
}

struct CausalityReport {
  double max_violation = 0.0;          // outside the future cone
  double max_inside_difference = 0.0;  // inside the cone, for contrast
  std::size_t outside_probes = 0;
  std::size_t inside_probes = 0;
  bool passed = true;
};

inline CausalityReport causality_check(const EnergyProfile& pre, const EnergyProfile& post, const Event& origin,
                                       const std::vector<Event>& probes, double tol) {
  if (probes.empty()) throw DomainError("causality check needs at least one probe");
  CausalityReport r;
  for (const Event& probe : probes) {
    const double diff = std::abs(pre(probe) - post(probe));
    if (outside_future_cone(origin, probe)) {
      ++r.outside_probes;
      r.max_violation = std::max(r.max_violation, diff);
    } else {
      ++r.inside_probes;
      r.max_inside_difference = std::max(r.max_inside_difference, diff);
    }
  }
  r.passed = r.max_violation <= tol;
  return r;
}

enum class ProjectionOutcome { projected, no_admissible_causal_branch };

struct ConstrainedProjection {
  ProjectionOutcome outcome = ProjectionOutcome::projected;
  std::optional<Projection> projection;
  std::vector<bool> allowed;  // per branch: passes the light-cone check
};

/// Projection restricted to branches that leave the energy density unchanged
/// outside the future cone of the measurement event (within `tol`). Born
/// weights are renormalized over the allowed branches.
inline ConstrainedProjection constrained_project(const FockState& state, const MeasurementEvent& mev,
                                                 const std::vector<Event>& probes, double tol, std::uint64_t seed) {
  const auto p = born_probabilities(state, mev.branches);
  const EnergyProfile pre = state_energy_profile(state, mev.branches);
  ConstrainedProjection out;
  std::vector<double> allowed_p(p.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const bool ok =
        p[i] > 0.0 && causality_check(pre, mev.branches[i].energy_profile, mev.event, probes, tol).passed;
    out.allowed.push_back(ok);
    if (ok) {
      allowed_p[i] = p[i];
      total += p[i];
    }
  }
  if (!(total > 0.0)) {
    out.outcome = ProjectionOutcome::no_admissible_causal_branch;
    return out;
  }
  for (double& v : allowed_p) v /= total;
  const std::size_t i = sample_index(allowed_p, uniform01(seed));
  out.projection = Projection{i, allowed_p[i], mev.branches[i].state};
  return out;
}

// --- trial records -------------------------------------------------------

struct TrialRecord {
  std::uint64_t seed = 0;
  std::size_t branch = 0;
  double probability = 0.0;
  CausalityReport causality;
};

namespace detail {
inline std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}
}  // namespace detail

/// Stable single-line rendering; identical records give identical bytes.
inline std::string serialize(const TrialRecord& r) {
  return "{\"seed\":" + std::to_string(r.seed) + ",\"branch\":" + std::to_string(r.branch) +
         ",\"probability\":" + detail::shortest(r.probability) +
         ",\"max_violation\":" + detail::shortest(r.causality.max_violation) +
         ",\"max_inside_difference\":" + detail::shortest(r.causality.max_inside_difference) +
         ",\"passed\":" + (r.causality.passed ? "true" : "false") + "}";
}

// --- scenario building blocks ------------------------------------------

/// Normalized Gaussian energy bump of total energy `mass` and width `width`.
inline EnergyProfile gaussian_bump(std::vector<double> centre, double mass, double width) {
  if (!(width > 0.0)) throw DomainError("bump width must be > 0");
  return [centre = std::move(centre), mass, width](const Event& e) {
    if (e.x.size() != centre.size()) throw DomainError("probe dimension does not match bump centre");
    double r2 = 0.0;
    for (std::size_t i = 0; i < centre.size(); ++i) r2 += (e.x[i] - centre[i]) * (e.x[i] - centre[i]);
    const double norm = std::pow(2.0 * std::numbers::pi * width * width, 0.5 * static_cast<double>(centre.size()));
    return mass * std::exp(-0.5 * r2 / (width * width)) / norm;
  };
}

inline EnergyProfile sum_profiles(std::vector<EnergyProfile> parts) {
  return [parts = std::move(parts)](const Event& e) {
    double s = 0.0;
    for (const auto& p : parts) s += p(e);
    return s;
  };
}

/// Four two-level spin modes: left+, left−, right+, right−.
struct SpinPairModes {
  static constexpr std::uint32_t left_up = 0, left_down = 1, right_up = 2, right_down = 3;
  static BasisTag tag() { return BasisTag{0x5350494E50414952ull, 4}; }
};

struct EprConfig {
  Event left_measurement{0.0, {-5.0, 0.0, 0.0}};   // X
  Event right_measurement{0.0, {5.0, 0.0, 0.0}};   // Y
  complex amplitude_one{std::numbers::sqrt2 / 2.0, 0.0};  // |I⟩ = |+⟩_L |−⟩_R
  complex amplitude_two{std::numbers::sqrt2 / 2.0, 0.0};  // |II⟩ = |−⟩_L |+⟩_R
  double particle_energy = 1.0;
  double particle_width = 0.5;
  std::vector<Event> probes;
  double tolerance = 0.0;
};

struct EprResult {
  std::size_t trials = 0;
  std::size_t count_one = 0;
  std::size_t count_two = 0;
  std::size_t anticorrelated = 0;
  std::vector<double> probabilities;
  CausalityReport worst_causality;        // over all trials
  CausalityReport acausal_counterexample;  // branch set moving energy to a spacelike point
  double counterexample_shift = 0.0;
  std::vector<TrialRecord> sample_records;  // the first few trials
  double anticorrelation_rate() const {
    return trials == 0 ? 0.0 : static_cast<double>(anticorrelated) / static_cast<double>(trials);
  }
};

/// Spacelike or not, in flat coordinates.
inline bool spacelike_separated(const Event& a, const Event& b) {
  return outside_future_cone(a, b) && outside_future_cone(b, a);
}

inline EprResult run_epr_scenario(const EprConfig& cfg, std::size_t n_trials, std::uint64_t seed) {
  if (!spacelike_separated(cfg.left_measurement, cfg.right_measurement))
    throw DomainError("EPR measurement events X and Y must be spacelike-separated");
  if (cfg.probes.empty()) throw DomainError("EPR scenario needs probes");

  using M = SpinPairModes;
  const BasisTag tag = M::tag();
  const auto pair_state = [&](std::uint32_t l, std::uint32_t r) {
    return FockState::basis_vector(tag, OccupationVector{{l, 1u}, {r, 1u}});
  };
  const FockState one = pair_state(M::left_up, M::right_down);
  const FockState two = pair_state(M::left_down, M::right_up);

  // Spin does not enter T_00: both branches carry the same two particles.
  const EnergyProfile particles =
      sum_profiles({gaussian_bump(cfg.left_measurement.x, cfg.particle_energy, cfg.particle_width),
                    gaussian_bump(cfg.right_measurement.x, cfg.particle_energy, cfg.particle_width)});
  const MeasurementEvent at_x{cfg.left_measurement,
                              BranchSet({{one, "I", particles}, {two, "II", particles}})};

  const FockState psi = superpose({{cfg.amplitude_one, one}, {cfg.amplitude_two, two}}, true);
  const EnergyProfile pre = state_energy_profile(psi, at_x.branches);

  EprResult res;
  res.trials = n_trials;
  res.probabilities = born_probabilities(psi, at_x.branches);
  for (std::size_t i = 0; i < n_trials; ++i) {
    const std::uint64_t s = trial_seed(seed, i);
    const Projection pr = project(psi, at_x, s);
    (pr.index == 0 ? res.count_one : res.count_two) += 1;

    // Observer at Y reads the right spin of the post-measurement state.
    const bool left_up = number_expectation(pr.post_state, M::left_up) == 1.0;
    const bool right_down = number_expectation(pr.post_state, M::right_down) == 1.0;
    const bool left_down = number_expectation(pr.post_state, M::left_down) == 1.0;
    const bool right_up = number_expectation(pr.post_state, M::right_up) == 1.0;
    if ((left_up && right_down) != (left_down && right_up)) ++res.anticorrelated;

    const CausalityReport c =
        causality_check(pre, at_x.branches[pr.index].energy_profile, cfg.left_measurement, cfg.probes, cfg.tolerance);
    auto& w = res.worst_causality;
    w.max_violation = std::max(w.max_violation, c.max_violation);
    w.max_inside_difference = std::max(w.max_inside_difference, c.max_inside_difference);
    w.outside_probes = c.outside_probes;
    w.inside_probes = c.inside_probes;
    w.passed = w.passed && c.passed;
    if (res.sample_records.size() < 8) res.sample_records.push_back(TrialRecord{s, pr.index, pr.probability, c});
  }

  // Deliberately acausal variant: branch I also moves energy δ to a point
  // spacelike to X (beside Y, outside X's future cone at the probe times).
  const double shift = cfg.particle_energy;
  std::vector<double> far = cfg.right_measurement.x;
  far[0] += 2.0 * cfg.particle_width;
  const EnergyProfile moved = sum_profiles({particles, gaussian_bump(far, shift, cfg.particle_width)});
  const MeasurementEvent acausal{cfg.left_measurement, BranchSet({{one, "I*", moved}, {two, "II", particles}})};
  res.acausal_counterexample = causality_check(state_energy_profile(psi, acausal.branches), moved,
                                               cfg.left_measurement, cfg.probes, cfg.tolerance);
  res.counterexample_shift = shift;
  return res;
}

struct PageGeilkerConfig {
  std::vector<double> sphere_a{-1.0, 0.0, 0.0};
  std::vector<double> sphere_b{1.0, 0.0, 0.0};
  double sphere_mass = 1.0;
  double sphere_width = 0.3;
  Event lab_event{0.0, {0.0, 0.0, 0.0}};
  complex amplitude_plus{std::numbers::sqrt2 / 2.0, 0.0};   // |+⟩ moves the sphere to A
  complex amplitude_minus{std::numbers::sqrt2 / 2.0, 0.0};  // |−⟩ moves it to B
  std::vector<Event> probes;
  double tolerance = 1e-12;
};

struct PageGeilkerResult {
  std::size_t trials = 0;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  std::vector<double> probabilities;
  bool every_post_is_one_sphere = true;
  double max_post_deviation = 0.0;  // |E_post − E_chosen| over probes and trials
  double min_discontinuity = std::numeric_limits<double>::infinity();  // per-trial outside-cone jump
  double max_discontinuity = 0.0;
  CausalityReport worst_causality;
  ProjectionOutcome constrained_outcome = ProjectionOutcome::projected;
};

/// Electron spin decides whether the sphere sits at A or at B.
struct SingleSpinModes {
  static constexpr std::uint32_t up = 0, down = 1;
  static BasisTag tag() { return BasisTag{0x5350494E31ull, 2}; }
};

inline PageGeilkerResult run_page_geilker_scenario(const PageGeilkerConfig& cfg, std::size_t n_trials,
                                                   std::uint64_t seed) {
  if (cfg.probes.empty()) throw DomainError("Page-Geilker scenario needs probes");
  using M = SingleSpinModes;
  const FockState at_a = FockState::basis_vector(M::tag(), OccupationVector{{M::up, 1u}});
  const FockState at_b = FockState::basis_vector(M::tag(), OccupationVector{{M::down, 1u}});
  const EnergyProfile sphere_a = gaussian_bump(cfg.sphere_a, cfg.sphere_mass, cfg.sphere_width);
  const EnergyProfile sphere_b = gaussian_bump(cfg.sphere_b, cfg.sphere_mass, cfg.sphere_width);
  const MeasurementEvent lab{cfg.lab_event, BranchSet({{at_a, "A", sphere_a}, {at_b, "B", sphere_b}})};

  const FockState psi = superpose({{cfg.amplitude_plus, at_a}, {cfg.amplitude_minus, at_b}}, true);
  const EnergyProfile pre = state_energy_profile(psi, lab.branches);

  PageGeilkerResult res;
  res.trials = n_trials;
  res.probabilities = born_probabilities(psi, lab.branches);
  for (std::size_t i = 0; i < n_trials; ++i) {
    const Projection pr = project(psi, lab, trial_seed(seed, i));
    (pr.index == 0 ? res.count_a : res.count_b) += 1;
    const EnergyProfile post = state_energy_profile(pr.post_state, lab.branches);
    const EnergyProfile& chosen = lab.branches[pr.index].energy_profile;
    for (const Event& e : cfg.probes) res.max_post_deviation = std::max(res.max_post_deviation, std::abs(post(e) - chosen(e)));

    const CausalityReport c = causality_check(pre, post, cfg.lab_event, cfg.probes, cfg.tolerance);
    res.min_discontinuity = std::min(res.min_discontinuity, c.max_violation);
    res.max_discontinuity = std::max(res.max_discontinuity, c.max_violation);
    res.worst_causality.max_violation = std::max(res.worst_causality.max_violation, c.max_violation);
    res.worst_causality.max_inside_difference =
        std::max(res.worst_causality.max_inside_difference, c.max_inside_difference);
    res.worst_causality.outside_probes = c.outside_probes;
    res.worst_causality.inside_probes = c.inside_probes;
    res.worst_causality.passed = res.worst_causality.passed && c.passed;
  }
  res.every_post_is_one_sphere = res.max_post_deviation == 0.0;
  if (n_trials == 0) res.min_discontinuity = 0.0;
  res.constrained_outcome = constrained_project(psi, lab, cfg.probes, cfg.tolerance, seed).outcome;
  return res;
}

/// Probes on the x axis: every combination of `times` and `xs`, other coordinates 0.
inline std::vector<Event> axis_probes(const std::vector<double>& times, const std::vector<double>& xs,
                                      int dimension = 3) {
  std::vector<Event> out;
  for (double t : times)
    for (double x : xs) {
      Event e{t, std::vector<double>(static_cast<std::size_t>(dimension), 0.0)};
      e.x[0] = x;
      out.push_back(std::move(e));
    }
  return out;
}

}  // namespace semilab
