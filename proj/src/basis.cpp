#include "cf/basis.hpp"

#include <cmath>
#include <string>

#include "cf/errors.hpp"

namespace cf {

Grid build_grid(int max_mode, double extent_factor, double oversample) {
  if (max_mode < 0) throw ConfigError("build_grid: max_mode must be >= 0");
  if (extent_factor < 1.0)
    throw ConfigError("build_grid: extent_factor < 1 under-resolves the turning point");
  if (oversample < 1.0)
    throw ConfigError("build_grid: oversample < 1 under-resolves mode " + std::to_string(max_mode));

  const double kmax = std::sqrt(2.0 * max_mode + 1.0);  // classical turning point of mode K
  // the evanescent tail past the turning point has a K-independent width, so
  // small K needs an additive margin on top of the multiplicative factor
  const double half_width = std::max(extent_factor * kmax, kmax + 4.0);
  const double dx_max = 0.5 * M_PI / (kmax * oversample);
  const auto half_count = static_cast<std::size_t>(std::ceil(half_width / dx_max));
  const double dx = half_width / static_cast<double>(half_count);

  Grid g;
  g.spacing = dx;
  g.extent = half_width;
  g.built_for = max_mode;
  g.points.resize(2 * half_count + 1);
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    g.points[i] = (static_cast<double>(i) - static_cast<double>(half_count)) * dx;
  }
  return g;
}

BasisTable build_basis(int max_mode, const Grid& grid) {
  if (grid.built_for < max_mode)
    throw ConfigError("build_basis: grid was built for a lower mode count");

  const std::size_t m = grid.size();
  BasisTable basis;
  basis.max_mode = max_mode;
  basis.grid = grid;
  basis.values.resize(static_cast<std::size_t>(max_mode + 1) * m);

  // phi_0 = pi^{-1/4} exp(-x^2/2), phi_1 = sqrt(2) x phi_0,
  // phi_{n+1} = sqrt(2/(n+1)) x phi_n - sqrt(n/(n+1)) phi_{n-1}
  const double c0 = std::pow(M_PI, -0.25);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = grid.points[i];
    basis.values[i] = c0 * std::exp(-0.5 * x * x);
  }
  if (max_mode >= 1) {
    for (std::size_t i = 0; i < m; ++i) {
      basis.values[m + i] = std::sqrt(2.0) * grid.points[i] * basis.values[i];
    }
  }
  for (int n = 1; n < max_mode; ++n) {
    const double a = std::sqrt(2.0 / (n + 1.0));
    const double b = std::sqrt(n / (n + 1.0));
    const double* cur = basis.values.data() + static_cast<std::size_t>(n) * m;
    const double* prev = basis.values.data() + static_cast<std::size_t>(n - 1) * m;
    double* next = basis.values.data() + static_cast<std::size_t>(n + 1) * m;
    for (std::size_t i = 0; i < m; ++i) {
      next[i] = a * grid.points[i] * cur[i] - b * prev[i];
    }
  }

  // Quadrature orthonormality gate.
  double worst = 0.0;
  for (int p = 0; p <= max_mode; ++p) {
    const double* fp = basis.values.data() + static_cast<std::size_t>(p) * m;
    for (int q = p; q <= max_mode; ++q) {
      if ((p + q) % 2 != 0) continue;  // odd parity product integrates to zero exactly
      const double* fq = basis.values.data() + static_cast<std::size_t>(q) * m;
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += fp[i] * fq[i];
      s *= grid.spacing;
      const double err = std::abs(s - (p == q ? 1.0 : 0.0));
      if (err > worst) worst = err;
    }
  }
  if (worst > 1e-10) {
    throw NumericalError("build_basis: orthonormality defect " + std::to_string(worst) +
                         " exceeds 1e-10; grid too coarse or short for mode " +
                         std::to_string(max_mode));
  }
  return basis;
}

std::vector<std::complex<double>> synthesize_profile(
    std::span<const std::complex<double>> amplitudes, const BasisTable& basis) {
  if (amplitudes.size() != static_cast<std::size_t>(basis.max_mode + 1))
    throw ConfigError("synthesize_profile: amplitude count does not match basis");
  const std::size_t m = basis.grid.size();
  std::vector<std::complex<double>> psi(m, {0.0, 0.0});
  for (int n = 0; n <= basis.max_mode; ++n) {
    const std::complex<double> a = amplitudes[static_cast<std::size_t>(n)];
    if (a == std::complex<double>{0.0, 0.0}) continue;
    const double* phi = basis.values.data() + static_cast<std::size_t>(n) * m;
    for (std::size_t i = 0; i < m; ++i) psi[i] += a * phi[i];
  }
  return psi;
}

double quadrature(std::span<const double> samples, const Grid& grid) {
  if (samples.size() != grid.size())
    throw ConfigError("quadrature: sample count does not match grid");
  double s = 0.0;
  for (double v : samples) s += v;
  return s * grid.spacing;
}

}  // namespace cf
