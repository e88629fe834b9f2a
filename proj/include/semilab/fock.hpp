#pragma once

// Sparse bosonic Fock states over a finite mode basis.
//
// A state is a finite sum of occupation-number basis vectors with complex
// amplitudes. All operations return new values; nothing mutates in place.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semilab/errors.hpp"

namespace semilab {

using complex = std::complex<double>;

/// Amplitudes with modulus below this are removed after arithmetic.
inline constexpr double kAmplitudeDropTolerance = 1e-15;

/// Identity of the mode basis a state lives over.
struct BasisTag {
  std::uint64_t id = 0;
  std::size_t mode_count = 0;

  friend bool operator==(const BasisTag&, const BasisTag&) = default;
};

/// Occupation numbers keyed by mode index; only nonzero counts are stored,
/// sorted by mode index so equality and ordering are canonical.
class OccupationVector {
 public:
  using Entry = std::pair<std::uint32_t, std::uint32_t>;  // (mode, count)

  OccupationVector() = default;

  /// Builds from (mode, count) pairs in any order; zero counts are ignored,
  /// repeated modes accumulate.
  OccupationVector(std::initializer_list<Entry> entries) {
    for (const auto& [mode, n] : entries) {
      std::uint32_t current = count(mode);
      *this = with_count(mode, current + n);
    }
  }

  std::uint32_t count(std::size_t mode) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), mode,
                               [](const Entry& e, std::size_t m) { return e.first < m; });
    return (it != entries_.end() && it->first == mode) ? it->second : 0u;
  }

  OccupationVector with_count(std::size_t mode, std::uint32_t n) const {
    OccupationVector out = *this;
    auto it = std::lower_bound(out.entries_.begin(), out.entries_.end(), mode,
                               [](const Entry& e, std::size_t m) { return e.first < m; });
    const auto m = static_cast<std::uint32_t>(mode);
    if (it != out.entries_.end() && it->first == m) {
      if (n == 0) {
        out.entries_.erase(it);
      } else {
        it->second = n;
      }
    } else if (n != 0) {
      out.entries_.insert(it, Entry{m, n});
    }
    return out;
  }

  std::uint64_t total() const noexcept {
    std::uint64_t sum = 0;
    for (const auto& e : entries_) sum += e.second;
    return sum;
  }

  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  friend auto operator<=>(const OccupationVector&, const OccupationVector&) = default;
  friend bool operator==(const OccupationVector&, const OccupationVector&) = default;

 private:
  std::vector<Entry> entries_;
};

enum class Ladder { create, annihilate };

class FockState {
 public:
  using TermMap = std::map<OccupationVector, complex>;

  /// The zero vector (not the vacuum).
  explicit FockState(BasisTag basis) : basis_(basis) {}

  FockState(BasisTag basis, TermMap terms) : basis_(basis), terms_(std::move(terms)) {
    for (const auto& [occ, amp] : terms_) check_modes(occ);
    cleanup();
  }

  static FockState vacuum(BasisTag basis) {
    return FockState(basis, TermMap{{OccupationVector{}, complex{1.0, 0.0}}});
  }

  /// Single normalized basis vector |occ⟩.
  static FockState basis_vector(BasisTag basis, OccupationVector occ) {
    TermMap terms;
    terms.emplace(std::move(occ), complex{1.0, 0.0});
    return FockState(basis, std::move(terms));
  }

  const BasisTag& basis() const noexcept { return basis_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  complex amplitude(const OccupationVector& occ) const {
    auto it = terms_.find(occ);
    return it == terms_.end() ? complex{} : it->second;
  }

  double norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& [occ, amp] : terms_) s += std::norm(amp);
    return s;
  }

  FockState scaled(complex factor) const {
    TermMap out = terms_;
    for (auto& [occ, amp] : out) amp *= factor;
    return FockState(basis_, std::move(out));
  }

  FockState normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw ZeroNormError("cannot normalize the zero state");
    return scaled(complex{1.0 / std::sqrt(n2), 0.0});
  }

  /// Sorted list of modes occupied in at least one term.
  std::vector<std::size_t> occupied_modes() const {
    std::vector<std::size_t> modes;
    for (const auto& [occ, amp] : terms_)
      for (const auto& e : occ.entries()) modes.push_back(e.first);
    std::sort(modes.begin(), modes.end());
    modes.erase(std::unique(modes.begin(), modes.end()), modes.end());
    return modes;
  }

 private:
  void check_modes(const OccupationVector& occ) const {
    for (const auto& e : occ.entries())
      if (e.first >= basis_.mode_count)
        throw BasisMismatch("occupation references mode " + std::to_string(e.first) +
                            " outside a basis of " + std::to_string(basis_.mode_count) + " modes");
  }

  void cleanup() {
    std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kAmplitudeDropTolerance; });
  }

  BasisTag basis_;
  TermMap terms_;
};

inline void require_same_basis(const FockState& a, const FockState& b) {
  if (!(a.basis() == b.basis())) throw BasisMismatch("states live over different mode bases");
}

inline FockState new_vacuum(BasisTag basis) { return FockState::vacuum(basis); }

inline FockState apply_ladder(const FockState& state, std::size_t mode, Ladder kind) {
  if (mode >= state.basis().mode_count)
    throw BasisMismatch("mode index " + std::to_string(mode) + " not in basis of " +
                        std::to_string(state.basis().mode_count) + " modes");
  FockState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    const std::uint32_t n = occ.count(mode);
    if (kind == Ladder::create) {
      out[occ.with_count(mode, n + 1)] += amp * std::sqrt(static_cast<double>(n) + 1.0);
    } else if (n > 0) {
      out[occ.with_count(mode, n - 1)] += amp * std::sqrt(static_cast<double>(n));
    }
  }
  return FockState(state.basis(), std::move(out));
}

/// Σ_k coeffs[k]·a_k |state⟩. Only occupied modes contribute, so the cost is
/// proportional to the number of terms times their occupied-mode count.
inline FockState apply_annihilators(const FockState& state, std::span<const complex> coeffs) {
  if (coeffs.size() != state.basis().mode_count)
    throw BasisMismatch("coefficient vector length does not match basis");
  FockState::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    for (const auto& [mode, n] : occ.entries()) {
      const complex g = coeffs[mode];
      if (g == complex{}) continue;
      out[occ.with_count(mode, n - 1)] += g * amp * std::sqrt(static_cast<double>(n));
    }
  }
  return FockState(state.basis(), std::move(out));
}

/// ⟨a|b⟩, antilinear in the first argument.
inline complex inner(const FockState& a, const FockState& b) {
  require_same_basis(a, b);
  const auto& small = a.terms().size() <= b.terms().size() ? a.terms() : b.terms();
  const bool a_is_small = &small == &a.terms();
  complex sum{};
  for (const auto& [occ, amp] : small) {
    const complex other = a_is_small ? b.amplitude(occ) : a.amplitude(occ);
    sum += a_is_small ? std::conj(amp) * other : std::conj(other) * amp;
  }
  return sum;
}

/// ⟨N_k⟩ = Σ |c|² n_k over terms, assuming a normalized state.
inline double number_expectation(const FockState& state, std::size_t mode) {
  if (mode >= state.basis().mode_count) throw BasisMismatch("mode index outside basis");
  double s = 0.0;
  for (const auto& [occ, amp] : state.terms()) s += std::norm(amp) * occ.count(mode);
  return s;
}

/// Amplitude-weighted sum of states that share one basis.
inline FockState superpose(std::span<const std::pair<complex, FockState>> parts, bool normalize) {
  if (parts.empty()) throw DomainError("superpose needs at least one term");
  const BasisTag basis = parts.front().second.basis();
  FockState::TermMap out;
  for (const auto& [weight, st] : parts) {
    if (!(st.basis() == basis)) throw BasisMismatch("superposed states live over different bases");
    for (const auto& [occ, amp] : st.terms()) out[occ] += weight * amp;
  }
  FockState sum(basis, std::move(out));
  if (normalize) {
    if (sum.is_zero()) throw ZeroNormError("superposition is the zero vector; cannot normalize");
    return sum.normalized();
  }
  return sum;
}

inline FockState superpose(std::initializer_list<std::pair<complex, FockState>> parts, bool normalize) {
  std::vector<std::pair<complex, FockState>> v(parts);
  return superpose(std::span<const std::pair<complex, FockState>>(v), normalize);
}

}  // namespace semilab
