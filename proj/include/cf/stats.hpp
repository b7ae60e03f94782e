#pragma once

#include <span>
#include <vector>

namespace cf {

// Upper regularized incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

// Upper-tail p-value of a chi-squared statistic.
double chi_squared_p_value(double chi2, int dof);

struct Histogram {
  std::vector<double> edges;    // bins + 1 entries
  std::vector<double> density;  // normalized as a probability density
  long total = 0;               // sample count
};

Histogram histogram_density(const std::vector<double>& samples, double lo, double hi,
                            int bins);

// Freedman-Diaconis bin count for samples on [lo, hi], clamped to [10, 200].
int freedman_diaconis_bins(const std::vector<double>& samples, double lo, double hi);

// sup over histogram bin edges of |empirical CDF - reference CDF|, where the
// reference is a density tabulated on ref_x (trapezoid-integrated and
// renormalized).
double binned_cdf_distance(const std::vector<double>& samples,
                           std::span<const double> ref_x,
                           std::span<const double> ref_density, int bins);

}  // namespace cf
