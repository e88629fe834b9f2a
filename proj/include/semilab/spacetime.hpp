#pragma once

// Fixed background geometries. Geometric units G = c = ħ = 1, signature (+,−,−,−).
//
// Einstein tensors are closed forms per backend:
//   Minkowski          g = η,                         G = 0
//   Einstein-de Sitter g = diag(1, −t^{4/3}, …),      G_00 = 4/(3t²), G_ij = 0 (dust, p = 0)
//   Rindler2D          g = e^{2aξ} diag(1, −1) in (τ, ξ), G = 0 (flat; also identically zero in 2-D)

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "semilab/errors.hpp"

namespace semilab {

enum class BackendKind { minkowski, einstein_de_sitter, rindler2d };

inline std::string to_string(BackendKind k) {
  switch (k) {
    case BackendKind::minkowski: return "minkowski";
    case BackendKind::einstein_de_sitter: return "einstein_de_sitter";
    case BackendKind::rindler2d: return "rindler2d";
  }
  return "unknown";
}

struct Event {
  double t = 0.0;
  std::vector<double> x;
};

class SpacetimeBackend {
 public:
  static SpacetimeBackend minkowski(int dimension, double box_side) {
    if (dimension < 1 || dimension > 3) throw DomainError("Minkowski spatial dimension must be 1, 2 or 3");
    if (!(box_side > 0.0)) throw DomainError("Minkowski box side L must be > 0");
    return SpacetimeBackend(BackendKind::minkowski, dimension, box_side, 0.0, 0.0);
  }
  static SpacetimeBackend einstein_de_sitter(double comoving_volume) {
    if (!(comoving_volume > 0.0)) throw DomainError("EdS comoving volume V0 must be > 0");
    return SpacetimeBackend(BackendKind::einstein_de_sitter, 3, 0.0, comoving_volume, 0.0);
  }
  static SpacetimeBackend rindler2d(double acceleration) {
    if (!(acceleration > 0.0)) throw DomainError("Rindler acceleration a must be > 0");
    return SpacetimeBackend(BackendKind::rindler2d, 1, 0.0, 0.0, acceleration);
  }

  BackendKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return dimension_; }
  double box_side() const noexcept { return box_side_; }
  double comoving_volume() const noexcept { return comoving_volume_; }
  double acceleration() const noexcept { return acceleration_; }

  void validate(const Event& e) const {
    if (e.x.size() != static_cast<std::size_t>(dimension_))
      throw DomainError("event has " + std::to_string(e.x.size()) + " spatial coordinates, backend needs " +
                        std::to_string(dimension_));
    if (kind_ == BackendKind::einstein_de_sitter && !(e.t > 0.0))
      throw DomainError("Einstein-de Sitter events require t > 0");
  }

 private:
  SpacetimeBackend(BackendKind kind, int d, double L, double V0, double a)
      : kind_(kind), dimension_(d), box_side_(L), comoving_volume_(V0), acceleration_(a) {}

  BackendKind kind_;
  int dimension_;
  double box_side_;
  double comoving_volume_;
  double acceleration_;
};

/// Symmetric rank-2 tensor components at one event, indices 0..d.
class TensorSample {
 public:
  explicit TensorSample(int spatial_dimension)
      : n_(static_cast<std::size_t>(spatial_dimension) + 1), values_(n_ * n_, 0.0) {}

  std::size_t rank_size() const noexcept { return n_; }
  double operator()(std::size_t mu, std::size_t nu) const { return values_.at(mu * n_ + nu); }

  void set(std::size_t mu, std::size_t nu, double v) {
    values_.at(mu * n_ + nu) = v;
    values_.at(nu * n_ + mu) = v;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

inline TensorSample metric(const SpacetimeBackend& backend, const Event& event) {
  backend.validate(event);
  TensorSample g(backend.dimension());
  g.set(0, 0, 1.0);
  const auto d = static_cast<std::size_t>(backend.dimension());
  switch (backend.kind()) {
    case BackendKind::minkowski:
      for (std::size_t i = 1; i <= d; ++i) g.set(i, i, -1.0);
      break;
    case BackendKind::einstein_de_sitter: {
      const double a2 = std::pow(event.t, 4.0 / 3.0);
      for (std::size_t i = 1; i <= d; ++i) g.set(i, i, -a2);
      break;
    }
    case BackendKind::rindler2d: {
      const double conformal = std::exp(2.0 * backend.acceleration() * event.x[0]);
      g.set(0, 0, conformal);
      g.set(1, 1, -conformal);
      break;
    }
  }
  return g;
}

inline TensorSample einstein_tensor(const SpacetimeBackend& backend, const Event& event) {
  backend.validate(event);
  TensorSample G(backend.dimension());
  if (backend.kind() == BackendKind::einstein_de_sitter) {
    // Friedmann: G_00 = 3 (ȧ/a)² with a = t^{2/3}; 2ä/a + (ȧ/a)² = 0 so G_ij = 0.
    G.set(0, 0, 4.0 / (3.0 * event.t * event.t));
  }
  return G;
}

/// Volume of the spatial section: L^d for the Minkowski box, V0·t² for EdS.
inline double comoving_volume_element(const SpacetimeBackend& backend, double t) {
  switch (backend.kind()) {
    case BackendKind::minkowski: return std::pow(backend.box_side(), backend.dimension());
    case BackendKind::einstein_de_sitter:
      if (!(t > 0.0)) throw DomainError("Einstein-de Sitter volume element requires t > 0");
      return backend.comoving_volume() * t * t;
    case BackendKind::rindler2d: break;
  }
  throw DomainError("comoving volume element is not defined for the Rindler wedge chart");
}

/// True iff `probe` lies outside the future light cone of `origin` in flat
/// coordinates. Null separation counts as inside (causally connected).
inline bool outside_future_cone(const Event& origin, const Event& probe) {
  if (origin.x.size() != probe.x.size()) throw DomainError("events have different spatial dimension");
  const double dt = probe.t - origin.t;
  if (dt < 0.0) return true;
  double r2 = 0.0;
  for (std::size_t i = 0; i < origin.x.size(); ++i) {
    const double dx = probe.x[i] - origin.x[i];
    r2 += dx * dx;
  }
  return r2 > dt * dt;
}

}  // namespace semilab
