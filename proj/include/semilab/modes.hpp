#pragma once

// Mode bases for each backend.
//
//   minkowski_box        f_k(x,t) = e^{−i(ω_k t − k·x)} / √(2 ω_k V),  k = 2πn/L,  ω_k = √(k² + m²)
//   minkowski_continuum  right-moving massless modes e^{−ik(t−x)} / √(4πk) on a log-spaced k grid,
//                        each carrying its measure weight k·Δs (δ(k−k′) normalization)
//   eds_zero_mode        f_0(t) = e^{−imt} / (t √(2 m V0)), the only EdS mode that is quantized
//   rindler_wedge        right-moving massless wedge modes e^{−iω(τ−ξ)} / √(2 ω W) in the conformal
//                        chart t = e^{aξ} sinh(aτ)/a, x = e^{aξ} cosh(aτ)/a, box-normalized on a
//                        ξ-window of length W

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "semilab/errors.hpp"
#include "semilab/fock.hpp"
#include "semilab/spacetime.hpp"

namespace semilab {

enum class BasisKind { minkowski_box, minkowski_continuum, eds_zero_mode, rindler_wedge };

struct Mode {
  std::vector<int> n;       // integer lattice label (box modes only)
  std::vector<double> k;    // wavevector; for Rindler modes empty
  double omega = 0.0;
  double weight = 1.0;      // quadrature measure for continuum families
};

class ModeBasis {
 public:
  BasisKind kind() const noexcept { return kind_; }
  const BasisTag& tag() const noexcept { return tag_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const Mode& mode(std::size_t i) const {
    if (i >= modes_.size()) throw BasisMismatch("mode index " + std::to_string(i) + " outside basis");
    return modes_[i];
  }
  const std::vector<Mode>& modes() const noexcept { return modes_; }

  double mass() const noexcept { return mass_; }
  int dimension() const noexcept { return dimension_; }
  double box_side() const noexcept { return box_side_; }
  double comoving_volume() const noexcept { return comoving_volume_; }
  double acceleration() const noexcept { return acceleration_; }
  double window() const noexcept { return window_; }

  /// L^d for box bases.
  double volume() const { return std::pow(box_side_, dimension_); }

  /// Index of the box mode with lattice label n, or size() if absent.
  std::size_t find(const std::vector<int>& n) const {
    for (std::size_t i = 0; i < modes_.size(); ++i)
      if (modes_[i].n == n) return i;
    return modes_.size();
  }

  bool lives_on(const SpacetimeBackend& backend) const {
    switch (kind_) {
      case BasisKind::minkowski_box:
        return (backend.kind() == BackendKind::minkowski && backend.dimension() == dimension_ &&
                backend.box_side() == box_side_) ||
               (backend.kind() == BackendKind::rindler2d && dimension_ == 1);
      case BasisKind::minkowski_continuum: return backend.kind() == BackendKind::minkowski;
      case BasisKind::eds_zero_mode:
        return backend.kind() == BackendKind::einstein_de_sitter &&
               backend.comoving_volume() == comoving_volume_;
      case BasisKind::rindler_wedge:
        return backend.kind() == BackendKind::rindler2d && backend.acceleration() == acceleration_;
    }
    return false;
  }

 private:
  friend ModeBasis minkowski_basis(double, int, double, int);
  friend ModeBasis minkowski_continuum_basis(double, double, std::size_t);
  friend ModeBasis eds_zero_mode_basis(double, double);
  friend ModeBasis rindler_basis(double, const std::vector<double>&, double);

  void seal() {
    std::ostringstream key;
    key.precision(17);
    key << static_cast<int>(kind_) << '|' << mass_ << '|' << dimension_ << '|' << box_side_ << '|'
        << comoving_volume_ << '|' << acceleration_ << '|' << window_;
    for (const auto& m : modes_) {
      key << '|' << m.omega << ':' << m.weight;
      for (int v : m.n) key << ',' << v;
    }
    tag_ = BasisTag{std::hash<std::string>{}(key.str()), modes_.size()};
  }

  BasisKind kind_ = BasisKind::minkowski_box;
  BasisTag tag_;
  std::vector<Mode> modes_;
  double mass_ = 0.0;
  int dimension_ = 1;
  double box_side_ = 0.0;
  double comoving_volume_ = 0.0;
  double acceleration_ = 0.0;
  double window_ = 0.0;
};

/// Periodic-box modes with |n_i| ≤ n_max; the zero mode is dropped when m = 0.
inline ModeBasis minkowski_basis(double box_side, int dimension, double mass, int n_max) {
  if (!(box_side > 0.0)) throw DomainError("box side L must be > 0");
  if (dimension < 1 || dimension > 3) throw DomainError("dimension must be 1, 2 or 3");
  if (!(mass >= 0.0)) throw DomainError("mass must be >= 0");
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  if (mass == 0.0 && n_max == 0) throw DomainError("massless basis with n_max = 0 is empty");

  ModeBasis b;
  b.kind_ = BasisKind::minkowski_box;
  b.mass_ = mass;
  b.dimension_ = dimension;
  b.box_side_ = box_side;

  std::vector<int> n(static_cast<std::size_t>(dimension), -n_max);
  const double dk = 2.0 * std::numbers::pi / box_side;
  while (true) {
    bool zero = true;
    for (int v : n) zero = zero && v == 0;
    if (!(zero && mass == 0.0)) {
      Mode m;
      m.n = n;
      double k2 = 0.0;
      for (int v : n) {
        m.k.push_back(dk * v);
        k2 += m.k.back() * m.k.back();
      }
      m.omega = std::sqrt(k2 + mass * mass);
      b.modes_.push_back(std::move(m));
    }
    std::size_t axis = 0;
    while (axis < n.size() && n[axis] == n_max) n[axis++] = -n_max;
    if (axis == n.size()) break;
    ++n[axis];
  }
  b.seal();
  return b;
}

/// Massless right-moving 1-D continuum modes on `count` midpoint cells of
/// s = ln k spanning [k_min, k_max]. Weights are the measure k·Δs.
inline ModeBasis minkowski_continuum_basis(double k_min, double k_max, std::size_t count) {
  if (!(k_min > 0.0) || !(k_max > k_min)) throw DomainError("continuum grid needs 0 < k_min < k_max");
  if (count == 0) throw DomainError("continuum grid needs at least one cell");
  ModeBasis b;
  b.kind_ = BasisKind::minkowski_continuum;
  b.dimension_ = 1;
  const double s0 = std::log(k_min);
  const double ds = (std::log(k_max) - s0) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i) {
    Mode m;
    const double k = std::exp(s0 + (static_cast<double>(i) + 0.5) * ds);
    m.k = {k};
    m.omega = k;
    m.weight = k * ds;
    b.modes_.push_back(std::move(m));
  }
  b.seal();
  return b;
}

inline ModeBasis eds_zero_mode_basis(double mass, double comoving_volume) {
  if (!(mass > 0.0)) throw DomainError("EdS mode mass must be > 0");
  if (!(comoving_volume > 0.0)) throw DomainError("EdS comoving volume V0 must be > 0");
  ModeBasis b;
  b.kind_ = BasisKind::eds_zero_mode;
  b.mass_ = mass;
  b.dimension_ = 3;
  b.comoving_volume_ = comoving_volume;
  Mode m;
  m.n = {0, 0, 0};
  m.k = {0.0, 0.0, 0.0};
  m.omega = mass;
  b.modes_.push_back(std::move(m));
  b.seal();
  return b;
}

/// Log-spaced frequencies in [lo, hi], endpoints included.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw DomainError("log_spaced needs 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  const double r = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo * std::exp(r * static_cast<double>(i));
  out.back() = hi;
  return out;
}

inline std::vector<double> default_rindler_grid(double acceleration) {
  return log_spaced(0.1 * acceleration, 3.0 * acceleration, 16);
}

inline ModeBasis rindler_basis(double acceleration, const std::vector<double>& omega_grid, double window) {
  if (!(acceleration > 0.0)) throw DomainError("Rindler acceleration a must be > 0");
  if (!(window > 0.0)) throw DomainError("Rindler normalization window must be > 0");
  if (omega_grid.empty()) throw DomainError("Rindler frequency grid is empty");
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    if (!(omega_grid[i] > 0.0)) throw DomainError("Rindler frequency grid must be strictly positive");
    if (i > 0 && !(omega_grid[i] > omega_grid[i - 1]))
      throw DomainError("Rindler frequency grid must be strictly increasing");
  }
  ModeBasis b;
  b.kind_ = BasisKind::rindler_wedge;
  b.dimension_ = 1;
  b.acceleration_ = acceleration;
  b.window_ = window;
  for (double w : omega_grid) {
    Mode m;
    m.omega = w;
    b.modes_.push_back(std::move(m));
  }
  b.seal();
  return b;
}

inline FockState new_vacuum(const ModeBasis& basis) { return FockState::vacuum(basis.tag()); }

/// f_0(t) = e^{−imt} / (t √(2 m V0)); its conjugate multiplies a_0†.
inline complex eds_k0_mode(double t, double mass, double comoving_volume) {
  if (!(t > 0.0)) throw DomainError("EdS mode requires t > 0");
  if (!(mass > 0.0)) throw DomainError("EdS mode requires m > 0");
  if (!(comoving_volume > 0.0)) throw DomainError("EdS mode requires V0 > 0");
  return std::polar(1.0 / (t * std::sqrt(2.0 * mass * comoving_volume)), -mass * t);
}

/// Mode function value and its coordinate derivatives ∂_μ f at one event.
struct ModeJet {
  complex value;
  std::array<complex, 4> d{};  // ∂_t, ∂_1, ∂_2, ∂_3 (unused entries zero)
};

inline ModeJet mode_jet(const ModeBasis& basis, std::size_t index, const Event& event) {
  const Mode& m = basis.mode(index);
  ModeJet j;
  switch (basis.kind()) {
    case BasisKind::minkowski_box:
    case BasisKind::minkowski_continuum: {
      if (event.x.size() != m.k.size()) throw DomainError("event dimension does not match basis");
      double phase = -m.omega * event.t;
      for (std::size_t i = 0; i < m.k.size(); ++i) phase += m.k[i] * event.x[i];
      const double amp = basis.kind() == BasisKind::minkowski_box
                             ? 1.0 / std::sqrt(2.0 * m.omega * basis.volume())
                             : 1.0 / std::sqrt(4.0 * std::numbers::pi * m.omega);
      j.value = std::polar(amp, phase);
      j.d[0] = complex{0.0, -m.omega} * j.value;
      for (std::size_t i = 0; i < m.k.size(); ++i) j.d[i + 1] = complex{0.0, m.k[i]} * j.value;
      break;
    }
    case BasisKind::eds_zero_mode: {
      j.value = eds_k0_mode(event.t, basis.mass(), basis.comoving_volume());
      j.d[0] = j.value * complex{-1.0 / event.t, -basis.mass()};
      break;
    }
    case BasisKind::rindler_wedge: {
      // Event coordinates are (τ, ξ).
      if (event.x.size() != 1) throw DomainError("Rindler events are (tau, xi)");
      const double amp = 1.0 / std::sqrt(2.0 * m.omega * basis.window());
      j.value = std::polar(amp, -m.omega * (event.t - event.x[0]));
      j.d[0] = complex{0.0, -m.omega} * j.value;
      j.d[1] = complex{0.0, m.omega} * j.value;
      break;
    }
  }
  return j;
}

inline complex mode_value(const ModeBasis& basis, std::size_t index, const Event& event) {
  return mode_jet(basis, index, event).value;
}

/// Maps conformal wedge coordinates (τ, ξ) to inertial (t, x).
inline Event rindler_to_inertial(double acceleration, const Event& wedge) {
  const double r = std::exp(acceleration * wedge.x.at(0)) / acceleration;
  return Event{r * std::sinh(acceleration * wedge.t), {r * std::cosh(acceleration * wedge.t)}};
}

}  // namespace semilab
