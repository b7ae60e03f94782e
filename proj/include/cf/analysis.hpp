#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cf/basis.hpp"
#include "cf/hermitian_eig.hpp"
#include "cf/sampler.hpp"
#include "cf/stats.hpp"

namespace cf {

// Hermitian accumulator of sum over snapshots of conj(alpha_i) alpha_j.
// Supports associative, commutative merging across chains.
struct DensityMatrix {
  int dim = 0;
  long count = 0;
  std::vector<std::complex<double>> sums;  // dim x dim row-major

  void add_sample(std::span<const std::complex<double>> amplitudes);
  void merge(const DensityMatrix& other);
  std::complex<double> mean(int i, int j) const;
  double mean_trace() const;
};

DensityMatrix accumulate_density_matrix(const SampleStream& stream);

// Penrose-Onsager decomposition: eigenvalues are mode occupations, the
// dominant eigenvector is the condensate.
struct CondensateDecomposition {
  int dim = 0;
  std::vector<double> occupations;            // descending, sums to N
  std::vector<std::complex<double>> vectors;  // column n at [dim*n, dim*(n+1))

  std::span<const std::complex<double>> vector(int n) const {
    return {vectors.data() + static_cast<std::size_t>(dim) * n,
            static_cast<std::size_t>(dim)};
  }
  double condensate_occupation() const { return occupations.front(); }
  std::span<const std::complex<double>> condensate_vector() const { return vector(0); }
};

CondensateDecomposition diagonalize(const DensityMatrix& rho);

// Per-snapshot condensate occupation N_0 = |<beta0, alpha>|^2.
std::vector<double> occupation_series(const SampleStream& stream,
                                      std::span<const std::complex<double>> condensate_vector);

struct OccupationStats {
  double mean = 0.0;
  double mean_error = 0.0;  // blocked
  double variance = 0.0;
  double variance_error = 0.0;  // blocked
  Histogram excited_histogram;  // of N_ex = N - N_0, density over [0, N]
};

// bins = 0 selects Freedman-Diaconis.
OccupationStats occupation_statistics(const std::vector<double>& n0_series,
                                      double atom_number, int bins = 0);

struct CrossoverEstimate {
  double t_star = 0.0;
  double t_star_error = 0.0;
  bool at_edge = false;  // maximum not bracketed; t_star is the edge value
};

// Argmax of variance(T) by quadratic interpolation through the top three
// points; errors propagated from the variance errors.
CrossoverEstimate crossover_temperature(std::span<const double> temps,
                                        std::span<const double> variances,
                                        std::span<const double> errors);

struct CorrelationProfile {
  std::vector<double> x;                   // x >= 0; separation is 2x
  std::vector<double> g1;                  // g1(-x, x)
  std::vector<double> condensate_density;  // rescaled to 1 at the trap center
  double condensate_occupation = 0.0;
};

// g1(x) = <Psi*(-x) Psi(x)> / <|Psi(x)|^2>; with symmetric_denominator the
// denominator is sqrt(<|Psi(-x)|^2><|Psi(x)|^2>) instead.
CorrelationProfile g1_profile(const SampleStream& stream, const BasisTable& basis,
                              bool symmetric_denominator = false);
CorrelationProfile g1_profile(const DensityMatrix& rho, const BasisTable& basis,
                              bool symmetric_denominator = false);

// Full width at half maximum by linear interpolation around the two
// half-maximum crossings; requires a unique interior maximum.
double fwhm(std::span<const double> x, std::span<const double> y);

struct FluctuationEstimate {
  double normalized_variance = 0.0;  // (<n^2> - <n>^2) / <n>^2
  double error = 0.0;                // block standard error of the above
  double mean_density = 0.0;         // <n>
  double benchmark_form = 0.0;          // (<n^2> - <n>) / <n>^2 variant, reported alongside
};

// Local density fluctuation at a grid position x.
FluctuationEstimate local_density_fluctuations(const SampleStream& stream,
                                               const BasisTable& basis, double position);

}  // namespace cf
