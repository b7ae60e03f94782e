#pragma once

#include <vector>

namespace cf {

struct BlockingResult {
  double error = 0.0;                // standard error of the mean
  std::vector<double> level_errors;  // naive SE per blocking level
};

// Error of the mean of a correlated series by successive pairwise block
// averaging.  The reported error is the largest level estimate among levels
// that still hold enough blocks for the estimate itself to be stable; for
// well-resolved chains this sits on the blocking plateau.
BlockingResult blocking_analysis(std::vector<double> series);

double blocked_error(const std::vector<double>& series);

// Error on the sample variance, from blocking the centered squares.
double blocked_variance_error(const std::vector<double>& series);

}  // namespace cf
