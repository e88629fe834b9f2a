// Prints the Rindler occupancy of the Minkowski vacuum next to the Planck
// factor at temperature a/2π.

#include <cstdio>

#include "semilab/semilab.hpp"

int main() {
  using namespace semilab;
  const double a = 1.0;
  const double span = 16.0;
  const auto mink = minkowski_continuum_basis(1e-4 * a, 1e-4 * a * std::exp(span), 256);
  const auto rind = rindler_basis(a, default_rindler_grid(a), span / a);
  const auto B = bogolubov_coefficients(mink, rind);
  std::printf("%10s %14s %14s %10s\n", "omega/a", "occupancy", "planck", "row norm");
  for (std::size_t j = 0; j < rind.size(); ++j) {
    const double w = rind.mode(j).omega;
    std::printf("%10.4f %14.6e %14.6e %10.6f\n", w / a, rindler_occupancy_in_vacuum(B, j),
                unruh_planck_occupancy(w, a), B.row_normalization(j));
  }
}
