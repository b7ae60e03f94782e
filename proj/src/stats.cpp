#include "cf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cf/errors.hpp"

namespace cf {

namespace {

// Lower regularized gamma by series, for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma by continued fraction, for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / 1e-30;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw ConfigError("regularized_gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_squared_p_value(double chi2, int dof) {
  if (dof < 1) throw ConfigError("chi_squared_p_value: dof must be >= 1");
  return regularized_gamma_q(0.5 * dof, 0.5 * chi2);
}

Histogram histogram_density(const std::vector<double>& samples, double lo, double hi,
                            int bins) {
  if (samples.empty()) throw ConfigError("histogram_density: no samples");
  if (bins < 1 || !(hi > lo)) throw ConfigError("histogram_density: bad binning");
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  const double w = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + b * w;
  std::vector<long> counts(static_cast<std::size_t>(bins), 0);
  for (double x : samples) {
    if (x < lo || x > hi) continue;
    auto b = static_cast<std::size_t>((x - lo) / w);
    if (b >= counts.size()) b = counts.size() - 1;
    ++counts[b];
    ++h.total;
  }
  h.density.resize(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) {
    h.density[b] = static_cast<double>(counts[b]) / (static_cast<double>(h.total) * w);
  }
  return h;
}

int freedman_diaconis_bins(const std::vector<double>& samples, double lo, double hi) {
  if (samples.size() < 4) throw ConfigError("freedman_diaconis_bins: too few samples");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const auto n = sorted.size();
  const double q1 = sorted[n / 4];
  const double q3 = sorted[(3 * n) / 4];
  const double iqr = q3 - q1;
  if (iqr <= 0.0) return 10;
  const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  const int bins = static_cast<int>(std::ceil((hi - lo) / width));
  return std::clamp(bins, 10, 200);
}

double binned_cdf_distance(const std::vector<double>& samples,
                           std::span<const double> ref_x,
                           std::span<const double> ref_density, int bins) {
  if (ref_x.size() != ref_density.size() || ref_x.size() < 2)
    throw ConfigError("binned_cdf_distance: bad reference");
  const double lo = ref_x.front();
  const double hi = ref_x.back();
  const auto hist = histogram_density(samples, lo, hi, bins);

  // reference CDF by trapezoid, renormalized
  std::vector<double> cdf(ref_x.size(), 0.0);
  for (std::size_t i = 1; i < ref_x.size(); ++i) {
    cdf[i] = cdf[i - 1] +
             0.5 * (ref_density[i] + ref_density[i - 1]) * (ref_x[i] - ref_x[i - 1]);
  }
  const double z = cdf.back();
  if (!(z > 0.0)) throw NumericalError("binned_cdf_distance: reference integrates to zero");
  for (auto& c : cdf) c /= z;

  auto ref_cdf_at = [&](double x) {
    auto it = std::lower_bound(ref_x.begin(), ref_x.end(), x);
    if (it == ref_x.begin()) return 0.0;
    if (it == ref_x.end()) return 1.0;
    const auto i = static_cast<std::size_t>(it - ref_x.begin());
    const double t = (x - ref_x[i - 1]) / (ref_x[i] - ref_x[i - 1]);
    return cdf[i - 1] + t * (cdf[i] - cdf[i - 1]);
  };

  double emp = 0.0, sup = 0.0;
  const double w = (hi - lo) / bins;
  for (int b = 0; b < bins; ++b) {
    emp += hist.density[static_cast<std::size_t>(b)] * w;
    const double edge = hist.edges[static_cast<std::size_t>(b) + 1];
    sup = std::max(sup, std::abs(emp - ref_cdf_at(edge)));
  }
  return sup;
}

}  // namespace cf
