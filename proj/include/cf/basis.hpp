#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cf {

// Uniform symmetric spatial grid in oscillator-length units.  Point count is
// odd so x = 0 is always a grid point and x_i = -x_{M-1-i} holds exactly.
struct Grid {
  std::vector<double> points;
  double spacing = 0.0;
  double extent = 0.0;    // half-width L
  int built_for = 0;      // highest mode index the grid was sized for

  std::size_t size() const { return points.size(); }
  std::size_t center_index() const { return points.size() / 2; }
  // index of -x for grid point i
  std::size_t mirror_index(std::size_t i) const { return points.size() - 1 - i; }
};

// L >= extent_factor * sqrt(2K+1), dx <= pi / (2 sqrt(2K+1) oversample).
Grid build_grid(int max_mode, double extent_factor = 1.5, double oversample = 4.0);

// Normalized harmonic-oscillator eigenfunctions phi_n(x_i), n = 0..max_mode,
// tabulated row-major over the grid.  Immutable after construction; shared
// freely across chains.
struct BasisTable {
  int max_mode = 0;
  Grid grid;
  std::vector<double> values;  // (max_mode+1) x grid.size()

  std::span<const double> mode(int n) const {
    return {values.data() + static_cast<std::size_t>(n) * grid.size(), grid.size()};
  }
  double at(int n, std::size_t i) const {
    return values[static_cast<std::size_t>(n) * grid.size() + i];
  }
};

// Stable recurrence on the normalized functions; validates quadrature
// orthonormality to 1e-10 and throws NumericalError if the grid is too
// coarse or short for max_mode.
BasisTable build_basis(int max_mode, const Grid& grid);

// Psi(x_i) = sum_n amplitudes[n] phi_n(x_i); amplitude count must be
// max_mode + 1.
std::vector<std::complex<double>> synthesize_profile(
    std::span<const std::complex<double>> amplitudes, const BasisTable& basis);

// sum_i f(x_i) dx
double quadrature(std::span<const double> samples, const Grid& grid);

}  // namespace cf
