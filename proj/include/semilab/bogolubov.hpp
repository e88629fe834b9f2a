#pragma once

// Bogolubov coefficients between inertial and accelerated quantizations of a
// massless scalar in 1+1 dimensions (right-moving sector).
//
// With p_j the Rindler mode and u_k the Minkowski mode,
//   p_j = Σ_k (α_jk u_k + β_jk ū_k),   α_jk = (u_k, p_j),   β_jk = −(ū_k, p_j),
// where (f, g) = i ∫ dξ (f̄ ∂_τ g − ∂_τ f̄ g) on the τ = t = 0 slice x > 0.
//
// On that slice ∂_τ = a x ∂_t and, with y = k x, the overlap integrals become
//   α ∝ (a/k)^{iν} ∫_0^∞ y^{iν−1} (ν + y) e^{−iy} dy,
//   β ∝ −(a/k)^{iν} ∫_0^∞ y^{iν−1} (ν − y) e^{+iy} dy,      ν = ω/a,
// so the k dependence factors out and one integral pair per row suffices.
// The segment y ∈ [0, 1] is summed term by term (Abel-regularized at the
// horizon); the tail is integrated along the steepest-descent ray
// y = 1 ∓ i t, where the integrand decays like e^{−t}.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "semilab/errors.hpp"
#include "semilab/fock.hpp"
#include "semilab/modes.hpp"

namespace semilab {

class BogolubovMatrix {
 public:
  BogolubovMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), alpha_(rows * cols), beta_(rows * cols), weights_(cols, 1.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  complex alpha(std::size_t j, std::size_t k) const { return alpha_.at(j * cols_ + k); }
  complex beta(std::size_t j, std::size_t k) const { return beta_.at(j * cols_ + k); }
  double weight(std::size_t k) const { return weights_.at(k); }

  void set(std::size_t j, std::size_t k, complex a, complex b) {
    alpha_.at(j * cols_ + k) = a;
    beta_.at(j * cols_ + k) = b;
  }
  void set_weight(std::size_t k, double w) { weights_.at(k) = w; }

  /// Σ_k w_k (|α_jk|² − |β_jk|²); equals 1 for a canonical transformation.
  double row_normalization(std::size_t j) const {
    check_row(j);
    double s = 0.0;
    for (std::size_t k = 0; k < cols_; ++k) s += weights_[k] * (std::norm(alpha(j, k)) - std::norm(beta(j, k)));
    return s;
  }

  double beta_weight(std::size_t j) const {
    check_row(j);
    double s = 0.0;
    for (std::size_t k = 0; k < cols_; ++k) s += weights_[k] * std::norm(beta(j, k));
    return s;
  }

  void check_row(std::size_t j) const {
    if (j >= rows_) throw BasisMismatch("Bogolubov row " + std::to_string(j) + " out of range");
  }

  double quadrature_error = 0.0;  // largest estimated absolute error of any overlap integral

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<complex> alpha_;
  std::vector<complex> beta_;
  std::vector<double> weights_;
};

namespace detail {

struct OverlapIntegral {
  complex value;
  double error;
};

/// ∫_0^∞ y^{iν−1} (ν + s·y) e^{−s·i·y} dy for s = ±1.
inline OverlapIntegral wedge_overlap(double nu, int s, double tol) {
  const complex inu{0.0, nu};
  const double sd = static_cast<double>(s);

  // Head: e^{−s i y} = Σ (−s i)^n y^n / n!, each power integrated exactly on [0, 1].
  complex head{};
  complex coeff{1.0, 0.0};
  for (int n = 0; n < 60; ++n) {
    const double dn = static_cast<double>(n);
    const complex term = coeff * (nu / (inu + dn) + sd / (inu + dn + 1.0));
    head += term;
    if (n > 8 && std::abs(term) < 1e-18 * std::abs(head)) break;
    coeff *= complex{0.0, -sd} / (dn + 1.0);
  }

  // Tail on y = 1 − s i t, dy = −s i dt.
  auto integrand = [&](double t) {
    const complex y{1.0, -sd * t};
    return std::pow(y, inu - 1.0) * (nu + sd * y) * std::exp(complex{-t, -sd}) * complex{0.0, -sd};
  };
  using boost::math::quadrature::gauss_kronrod;
  double err_re = 0.0;
  double err_im = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  const double re = gauss_kronrod<double, 31>::integrate([&](double t) { return integrand(t).real(); }, 0.0, inf,
                                                          20, tol, &err_re);
  const double im = gauss_kronrod<double, 31>::integrate([&](double t) { return integrand(t).imag(); }, 0.0, inf,
                                                          20, tol, &err_im);
  return {head + complex{re, im}, std::hypot(err_re, err_im)};
}

}  // namespace detail

struct BogolubovOptions {
  double quadrature_tolerance = 1e-13;  // relative, per overlap integral
  double max_error = 1e-9;              // absolute error above which the computation is rejected
};

/// Coefficients relating `rind` modes (rows) to `mink` modes (columns).
///
/// Supported pairings: a Rindler wedge basis against a Minkowski continuum
/// basis whose log-k span equals a·W (one dilation cell), or two massless
/// 1-D Minkowski box bases of equal side (computed by exact periodic
/// quadrature, which gives the identity map for identical quantizations).
inline BogolubovMatrix bogolubov_coefficients(const ModeBasis& mink, const ModeBasis& rind,
                                              const BogolubovOptions& opts = {}) {
  if (mink.kind() == BasisKind::minkowski_continuum && rind.kind() == BasisKind::rindler_wedge) {
    const double a = rind.acceleration();
    const double W = rind.window();
    const auto& first = mink.mode(0);
    const auto& last = mink.mode(mink.size() - 1);
    const double ds = first.weight / first.k[0];
    const double span = std::log(last.k[0] / first.k[0]) + ds;
    if (std::abs(span - a * W) > 1e-9 * a * W)
      throw DomainError("Minkowski log-k span " + std::to_string(span) + " does not match a*W = " +
                        std::to_string(a * W));

    BogolubovMatrix B(rind.size(), mink.size());
    for (std::size_t k = 0; k < mink.size(); ++k) B.set_weight(k, mink.mode(k).weight);
    const double box = std::sqrt(2.0 * std::numbers::pi / W);
    for (std::size_t j = 0; j < rind.size(); ++j) {
      const double omega = rind.mode(j).omega;
      const double nu = omega / a;
      const auto ia = detail::wedge_overlap(nu, +1, opts.quadrature_tolerance);
      const auto ib = detail::wedge_overlap(nu, -1, opts.quadrature_tolerance);
      const double err = std::max(ia.error, ib.error);
      B.quadrature_error = std::max(B.quadrature_error, err);
      if (!(err <= opts.max_error) || !std::isfinite(std::abs(ia.value)) || !std::isfinite(std::abs(ib.value)))
        throw QuadratureError("Bogolubov overlap did not converge at omega = " + std::to_string(omega), err);
      for (std::size_t k = 0; k < mink.size(); ++k) {
        const double kk = mink.mode(k).k[0];
        const complex dilation = std::polar(1.0, nu * std::log(a / kk));
        const double pre = box / (4.0 * std::numbers::pi * std::sqrt(kk * omega));
        B.set(j, k, pre * dilation * ia.value, -pre * dilation * ib.value);
      }
    }
    return B;
  }

  if (mink.kind() == BasisKind::minkowski_box && rind.kind() == BasisKind::minkowski_box) {
    if (mink.dimension() != 1 || rind.dimension() != 1 || mink.mass() != 0.0 || rind.mass() != 0.0)
      throw DomainError("box-to-box Bogolubov coefficients need two massless 1-D bases");
    if (mink.box_side() != rind.box_side()) throw DomainError("box-to-box Bogolubov coefficients need equal L");
    const double L = mink.box_side();
    int n_max = 0;
    for (const auto& m : mink.modes()) n_max = std::max(n_max, std::abs(m.n[0]));
    for (const auto& m : rind.modes()) n_max = std::max(n_max, std::abs(m.n[0]));
    // Trapezoid on a periodic grid integrates e^{2πiqx/L} exactly for |q| < points.
    const std::size_t points = static_cast<std::size_t>(4 * n_max + 4);
    const double dx = L / static_cast<double>(points);

    BogolubovMatrix B(rind.size(), mink.size());
    for (std::size_t j = 0; j < rind.size(); ++j) {
      for (std::size_t k = 0; k < mink.size(); ++k) {
        complex a{};
        complex b{};
        for (std::size_t p = 0; p < points; ++p) {
          const Event e{0.0, {dx * static_cast<double>(p)}};
          const ModeJet u = mode_jet(mink, k, e);
          const ModeJet g = mode_jet(rind, j, e);
          // (f, g) = i ∫ (f̄ ∂_t g − ∂_t f̄ g) dx
          a += complex{0.0, 1.0} * (std::conj(u.value) * g.d[0] - std::conj(u.d[0]) * g.value);
          b += complex{0.0, 1.0} * (u.value * g.d[0] - u.d[0] * g.value);
        }
        B.set(j, k, a * dx, -b * dx);
      }
    }
    return B;
  }

  throw DomainError("unsupported basis pairing for Bogolubov coefficients");
}

/// ⟨0_M| b_j† b_j |0_M⟩ = Σ_k w_k |β_jk|².
inline double rindler_occupancy_in_vacuum(const BogolubovMatrix& B, std::size_t j) { return B.beta_weight(j); }

/// b_j |0_M⟩ = −Σ_k √w_k β̄_jk a_k† |0_M⟩ as a state over the Minkowski basis;
/// its squared norm equals the occupancy, so a positive occupancy certifies
/// that b_j does not annihilate the inertial vacuum.
inline FockState rindler_annihilator_on_vacuum(const BogolubovMatrix& B, std::size_t j, const ModeBasis& mink) {
  B.check_row(j);
  if (mink.size() != B.cols()) throw BasisMismatch("Minkowski basis does not match Bogolubov columns");
  FockState::TermMap terms;
  for (std::size_t k = 0; k < B.cols(); ++k)
    terms.emplace(OccupationVector{{static_cast<std::uint32_t>(k), 1u}},
                  -std::sqrt(B.weight(k)) * std::conj(B.beta(j, k)));
  return FockState(mink.tag(), std::move(terms));
}

/// 1/(e^{2πω/a} − 1).
inline double unruh_planck_occupancy(double omega, double acceleration) {
  return 1.0 / std::expm1(2.0 * std::numbers::pi * omega / acceleration);
}

}  // namespace semilab
