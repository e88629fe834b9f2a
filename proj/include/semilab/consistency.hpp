#pragma once

// Residuals of the semiclassical equation G_μν = 8π {Ψ|T_μν|Ψ}, scaling
// studies in the box/comoving volume, and one-parameter fits.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "semilab/errors.hpp"
#include "semilab/fock.hpp"
#include "semilab/modes.hpp"
#include "semilab/spacetime.hpp"
#include "semilab/stress_energy.hpp"

namespace semilab {

struct ResidualReport {
  std::vector<Event> events;
  std::vector<double> per_event;  // max_μν |G_μν − 8π T_μν|
  double global_max = 0.0;
  std::string parameters;
};

inline ResidualReport residual(const SpacetimeBackend& backend, const FockState& state, const ModeBasis& basis,
                               const std::vector<Event>& grid) {
  if (grid.empty()) throw DomainError("residual grid is empty");
  ResidualReport r;
  r.events = grid;
  r.per_event.reserve(grid.size());
  for (const Event& e : grid) {
    const TensorSample G = einstein_tensor(backend, e);
    const TensorSample T = stress_sample(state, basis, backend, e).components;
    double worst = 0.0;
    for (std::size_t i = 0; i < G.values().size(); ++i)
      worst = std::max(worst, std::abs(G.values()[i] - 8.0 * std::numbers::pi * T.values()[i]));
    r.per_event.push_back(worst);
    r.global_max = std::max(r.global_max, worst);
  }
  r.parameters = to_string(backend.kind()) + " m=" + std::to_string(basis.mass());
  return r;
}

struct ScalingRow {
  double value;
  double residual;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  std::optional<double> slope;  // least-squares d log(residual) / d log(value)
  std::string slope_label;      // formatted slope, or "undefined(zero)"
};

/// Tabulates `observable` over strictly increasing `values` and fits a log-log slope.
inline ScalingTable scaling_study(const std::vector<double>& values, const std::function<double(double)>& observable) {
  if (values.size() < 3) throw DomainError("scaling study needs at least 3 values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw DomainError("scaling values must be positive");
    if (i > 0 && !(values[i] > values[i - 1])) throw DomainError("scaling values must be strictly increasing");
  }
  ScalingTable table;
  bool degenerate = false;
  for (double v : values) {
    const double r = observable(v);
    table.rows.push_back({v, r});
    if (!(std::abs(r) > 0.0)) degenerate = true;
  }
  if (degenerate) {
    table.slope_label = "undefined(zero)";
    return table;
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(table.rows.size());
  for (const auto& row : table.rows) {
    const double x = std::log(row.value);
    const double y = std::log(std::abs(row.residual));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  table.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  char buf[32];
  table.slope_label = std::string(buf, std::to_chars(buf, buf + sizeof buf, *table.slope).ptr);
  return table;
}

/// Residual at one event for the EdS single-quantum state, as a function of V0.
/// When `mass` is empty the critical mass m = V0/6π is used for every V0.
inline double eds_residual_at(double comoving_volume, std::optional<double> mass, double t) {
  const double m = mass.value_or(comoving_volume / (6.0 * std::numbers::pi));
  const auto backend = SpacetimeBackend::einstein_de_sitter(comoving_volume);
  const auto basis = eds_zero_mode_basis(m, comoving_volume);
  return residual(backend, eds_single_quantum(basis), basis, {Event{t, {0.0, 0.0, 0.0}}}).global_max;
}

struct FitResult {
  double best = 0.0;
  double objective = 0.0;
  bool at_boundary = false;
  int iterations = 0;
};

/// Golden-section minimization of a unimodal objective on [lo, hi] to
/// absolute tolerance `tol`. Non-finite values abort the fit. Bracket ends
/// are evaluated too; if an end wins, it is returned with `at_boundary` set.
inline FitResult fit_parameter(const std::function<double(double)>& objective, double lo, double hi, double tol) {
  if (!(lo < hi)) throw DomainError("fit bracket needs lo < hi");
  if (!(tol > 0.0)) throw DomainError("fit tolerance must be positive");
  auto eval = [&](double x) {
    const double v = objective(x);
    if (!std::isfinite(v)) throw DomainError("objective is not finite at " + std::to_string(x));
    return v;
  };
  const double f_lo = eval(lo);
  const double f_hi = eval(hi);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c), fd = eval(d);
  int it = 0;
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
    ++it;
  }
  FitResult r;
  r.iterations = it;
  r.best = fc < fd ? c : d;
  r.objective = std::min(fc, fd);
  if (f_lo <= r.objective) {
    r.best = lo;
    r.objective = f_lo;
  }
  if (f_hi < r.objective) {
    r.best = hi;
    r.objective = f_hi;
  }
  r.at_boundary = (r.best - lo <= tol) || (hi - r.best <= tol);
  return r;
}

/// Events (t, 0, 0, 0) for each t.
inline std::vector<Event> time_grid(const std::vector<double>& times, int dimension = 3) {
  std::vector<Event> out;
  for (double t : times) out.push_back(Event{t, std::vector<double>(static_cast<std::size_t>(dimension), 0.0)});
  return out;
}

}  // namespace semilab
