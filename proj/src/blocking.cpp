#include "cf/blocking.hpp"

#include <cmath>
#include <cstddef>

#include "cf/errors.hpp"

namespace cf {

namespace {
double naive_se(const std::vector<double>& v) {
  const std::size_t n = v.size();
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n - 1);
  return std::sqrt(var / static_cast<double>(n));
}
}  // namespace

BlockingResult blocking_analysis(std::vector<double> series) {
  if (series.size() < 8) throw ConfigError("blocking_analysis: series too short");
  BlockingResult r;
  // Levels with fewer than 32 blocks carry too much noise in the error
  // estimate itself; the plateau is read as the max over the stable levels.
  while (series.size() >= 4) {
    const double se = naive_se(series);
    r.level_errors.push_back(se);
    if (series.size() >= 32 && se > r.error) r.error = se;
    const std::size_t half = series.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
      series[i] = 0.5 * (series[2 * i] + series[2 * i + 1]);
    }
    series.resize(half);
  }
  if (r.error == 0.0) r.error = r.level_errors.front();
  return r;
}

double blocked_error(const std::vector<double>& series) {
  return blocking_analysis(series).error;
}

double blocked_variance_error(const std::vector<double>& series) {
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(series.size());
  std::vector<double> sq(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    sq[i] = (series[i] - mean) * (series[i] - mean);
  }
  return blocked_error(sq);
}

}  // namespace cf
