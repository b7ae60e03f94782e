#include "cf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cf/blocking.hpp"
#include "cf/errors.hpp"

namespace cf {

namespace {
using cplx = std::complex<double>;
}

void DensityMatrix::add_sample(std::span<const cplx> amplitudes) {
  const auto n = static_cast<std::size_t>(dim);
  if (amplitudes.size() != n) throw ConfigError("DensityMatrix: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    const cplx ci = std::conj(amplitudes[i]);
    sums[i * n + i] += (ci * amplitudes[i]).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = ci * amplitudes[j];
      sums[i * n + j] += v;
      sums[j * n + i] += std::conj(v);  // Hermitian by construction
    }
  }
  ++count;
}

void DensityMatrix::merge(const DensityMatrix& other) {
  if (other.dim != dim) throw ConfigError("DensityMatrix::merge: dimension mismatch");
  for (std::size_t k = 0; k < sums.size(); ++k) sums[k] += other.sums[k];
  count += other.count;
}

cplx DensityMatrix::mean(int i, int j) const {
  if (count == 0) throw ConfigError("DensityMatrix: empty accumulator");
  return sums[static_cast<std::size_t>(i) * dim + j] / static_cast<double>(count);
}

double DensityMatrix::mean_trace() const {
  if (count == 0) throw ConfigError("DensityMatrix: empty accumulator");
  double t = 0.0;
  for (int i = 0; i < dim; ++i) t += sums[static_cast<std::size_t>(i) * dim + i].real();
  return t / static_cast<double>(count);
}

DensityMatrix accumulate_density_matrix(const SampleStream& stream) {
  if (stream.snapshots.empty())
    throw ConfigError("accumulate_density_matrix: empty stream");
  DensityMatrix rho;
  rho.dim = static_cast<int>(stream.snapshots.front().amplitudes.size());
  rho.sums.assign(static_cast<std::size_t>(rho.dim) * rho.dim, {0.0, 0.0});
  for (const auto& s : stream.snapshots) rho.add_sample(s.amplitudes);
  return rho;
}

CondensateDecomposition diagonalize(const DensityMatrix& rho) {
  const auto n = static_cast<std::size_t>(rho.dim);
  std::vector<cplx> mean(n * n);
  const double inv = 1.0 / static_cast<double>(rho.count);
  for (std::size_t k = 0; k < mean.size(); ++k) mean[k] = rho.sums[k] * inv;

  auto eig = hermitian_eigendecomposition(mean, rho.dim);

  // residual gate, scaled by the trace (= N for on-shell streams)
  const double scale = rho.mean_trace();
  for (int m = 0; m < rho.dim; ++m) {
    const auto beta = eig.vector(m);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) acc += mean[i * n + j] * beta[j];
      res += std::norm(acc - eig.values[static_cast<std::size_t>(m)] * beta[i]);
    }
    if (std::sqrt(res) > 1e-8 * scale)
      throw NumericalError("diagonalize: eigenpair residual exceeds 1e-8 * N");
  }

  CondensateDecomposition dec;
  dec.dim = rho.dim;
  dec.occupations = std::move(eig.values);
  dec.vectors = std::move(eig.vectors);
  return dec;
}

std::vector<double> occupation_series(const SampleStream& stream,
                                      std::span<const cplx> condensate_vector) {
  std::vector<double> series;
  series.reserve(stream.snapshots.size());
  for (const auto& s : stream.snapshots) {
    if (s.amplitudes.size() != condensate_vector.size())
      throw ConfigError("occupation_series: dimension mismatch");
    cplx overlap{0.0, 0.0};
    for (std::size_t i = 0; i < condensate_vector.size(); ++i) {
      overlap += std::conj(condensate_vector[i]) * s.amplitudes[i];
    }
    series.push_back(std::norm(overlap));
  }
  return series;
}

OccupationStats occupation_statistics(const std::vector<double>& n0_series,
                                      double atom_number, int bins) {
  if (n0_series.size() < 100)
    throw ConfigError("occupation_statistics: series too short for error bars");
  OccupationStats st;
  const auto n = static_cast<double>(n0_series.size());
  for (double x : n0_series) st.mean += x;
  st.mean /= n;
  for (double x : n0_series) st.variance += (x - st.mean) * (x - st.mean);
  st.variance /= n;
  st.mean_error = blocked_error(n0_series);
  st.variance_error = blocked_variance_error(n0_series);

  std::vector<double> nex(n0_series.size());
  for (std::size_t i = 0; i < n0_series.size(); ++i) nex[i] = atom_number - n0_series[i];
  if (bins <= 0) bins = freedman_diaconis_bins(nex, 0.0, atom_number);
  st.excited_histogram = histogram_density(nex, 0.0, atom_number, bins);
  return st;
}

namespace {
double parabola_vertex(double t0, double v0, double t1, double v1, double t2, double v2) {
  const double num = (t1 - t0) * (t1 - t0) * (v1 - v2) - (t1 - t2) * (t1 - t2) * (v1 - v0);
  const double den = (t1 - t0) * (v1 - v2) - (t1 - t2) * (v1 - v0);
  if (den == 0.0) return t1;
  return t1 - 0.5 * num / den;
}
}  // namespace

CrossoverEstimate crossover_temperature(std::span<const double> temps,
                                        std::span<const double> variances,
                                        std::span<const double> errors) {
  const std::size_t n = temps.size();
  if (n < 3 || variances.size() != n || errors.size() != n)
    throw ConfigError("crossover_temperature: need >= 3 matched points");
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (variances[i] > variances[k]) k = i;
  }
  CrossoverEstimate est;
  if (k == 0 || k == n - 1) {
    est.at_edge = true;
    est.t_star = temps[k];
    est.t_star_error = std::abs(temps[1] - temps[0]);
    return est;
  }
  est.t_star = parabola_vertex(temps[k - 1], variances[k - 1], temps[k], variances[k],
                               temps[k + 1], variances[k + 1]);
  // propagate variance errors through the vertex formula
  double var = 0.0;
  double v[3] = {variances[k - 1], variances[k], variances[k + 1]};
  const double e[3] = {errors[k - 1], errors[k], errors[k + 1]};
  for (int i = 0; i < 3; ++i) {
    if (e[i] <= 0.0) continue;
    double w[3] = {v[0], v[1], v[2]};
    w[i] += e[i];
    const double shifted =
        parabola_vertex(temps[k - 1], w[0], temps[k], w[1], temps[k + 1], w[2]);
    var += (shifted - est.t_star) * (shifted - est.t_star);
  }
  est.t_star_error = std::sqrt(var);
  return est;
}

namespace {

CorrelationProfile g1_from_mean_rho(const std::vector<cplx>& mean, int dim, long /*count*/,
                                    const BasisTable& basis, bool symmetric_denominator) {
  const std::size_t n = static_cast<std::size_t>(dim);
  if (dim != basis.max_mode + 1) throw ConfigError("g1_profile: basis dimension mismatch");
  const auto& grid = basis.grid;
  if (grid.size() % 2 == 0) throw ConfigError("g1_profile: grid is not symmetric");

  auto eig = hermitian_eigendecomposition(mean, dim);
  const auto beta = eig.vector(0);
  const double lambda0 = eig.values[0];

  CorrelationProfile prof;
  prof.condensate_occupation = lambda0;
  const std::size_t c = grid.center_index();
  const std::size_t half = grid.size() - c;  // points with x >= 0
  prof.x.resize(half);
  prof.g1.resize(half);
  prof.condensate_density.resize(half);

  std::vector<double> u(n);
  std::vector<cplx> w(n);
  double center_density = 0.0;
  for (std::size_t h = 0; h < half; ++h) {
    const std::size_t p = c + h;
    prof.x[h] = grid.points[p];
    for (std::size_t i = 0; i < n; ++i) u[i] = basis.at(static_cast<int>(i), p);
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) acc += mean[i * n + j] * u[j];
      w[i] = acc;
    }
    double den = 0.0, num = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double re = (u[i] * w[i]).real();
      den += re;
      num += (i % 2 == 0) ? re : -re;  // phi_i(-x) = (-1)^i phi_i(x)
    }
    double denominator = den;
    if (symmetric_denominator) {
      // <|Psi(-x)|^2> = sum_ij rho_ij (-1)^{i+j} u_i u_j
      double den_m = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
          const double sj = (j % 2 == 0) ? 1.0 : -1.0;
          acc += mean[i * n + j] * sj * u[j];
        }
        const double si = (i % 2 == 0) ? 1.0 : -1.0;
        den_m += (si * u[i] * acc).real();
      }
      denominator = std::sqrt(std::max(den * den_m, 0.0));
    }
    if (!(denominator > 0.0))
      throw NumericalError("g1_profile: vanishing density at x = " + std::to_string(prof.x[h]));
    prof.g1[h] = num / denominator;

    cplx amp{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) amp += beta[i] * u[i];
    prof.condensate_density[h] = lambda0 * std::norm(amp);
    if (h == 0) center_density = prof.condensate_density[0];
  }
  if (!(center_density > 0.0))
    throw NumericalError("g1_profile: vanishing condensate density at the center");
  for (auto& d : prof.condensate_density) d /= center_density;
  return prof;
}

}  // namespace

CorrelationProfile g1_profile(const DensityMatrix& rho, const BasisTable& basis,
                              bool symmetric_denominator) {
  const auto n = static_cast<std::size_t>(rho.dim);
  std::vector<cplx> mean(n * n);
  const double inv = 1.0 / static_cast<double>(rho.count);
  for (std::size_t k = 0; k < mean.size(); ++k) mean[k] = rho.sums[k] * inv;
  return g1_from_mean_rho(mean, rho.dim, rho.count, basis, symmetric_denominator);
}

CorrelationProfile g1_profile(const SampleStream& stream, const BasisTable& basis,
                              bool symmetric_denominator) {
  return g1_profile(accumulate_density_matrix(stream), basis, symmetric_denominator);
}

double fwhm(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) throw ConfigError("fwhm: bad profile");
  std::size_t m = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (y[i] > y[m]) m = i;
  }
  if (m == 0 || m == n - 1)
    throw ConfigError("fwhm: maximum at the grid edge; enlarge extent_factor");
  const double half = 0.5 * y[m];

  double left = 0.0, right = 0.0;
  bool found = false;
  for (std::size_t i = m; i-- > 0;) {
    if (y[i] < half) {
      const double t = (half - y[i]) / (y[i + 1] - y[i]);
      left = x[i] + t * (x[i + 1] - x[i]);
      found = true;
      break;
    }
  }
  if (!found)
    throw NumericalError("fwhm: no left half-maximum crossing; enlarge extent_factor");
  found = false;
  for (std::size_t i = m + 1; i < n; ++i) {
    if (y[i] < half) {
      const double t = (y[i - 1] - half) / (y[i - 1] - y[i]);
      right = x[i - 1] + t * (x[i] - x[i - 1]);
      found = true;
      break;
    }
  }
  if (!found)
    throw NumericalError("fwhm: no right half-maximum crossing; enlarge extent_factor");
  return right - left;
}

FluctuationEstimate local_density_fluctuations(const SampleStream& stream,
                                               const BasisTable& basis, double position) {
  if (stream.snapshots.empty())
    throw ConfigError("local_density_fluctuations: empty stream");
  const auto& grid = basis.grid;
  std::size_t p = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(grid.points[i] - position) <= 0.5 * grid.spacing) {
      p = i;
      break;
    }
  }
  if (p == grid.size())
    throw ConfigError("local_density_fluctuations: position is not on the grid");
  const auto n = static_cast<std::size_t>(basis.max_mode + 1);

  std::vector<double> density;
  density.reserve(stream.snapshots.size());
  for (const auto& s : stream.snapshots) {
    if (s.amplitudes.size() != n)
      throw ConfigError("local_density_fluctuations: dimension mismatch");
    cplx psi{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) psi += s.amplitudes[i] * basis.at(static_cast<int>(i), p);
    density.push_back(std::norm(psi));
  }

  double m1 = 0.0, m2 = 0.0;
  for (double d : density) {
    m1 += d;
    m2 += d * d;
  }
  const auto count = static_cast<double>(density.size());
  m1 /= count;
  m2 /= count;
  if (!(m1 > 0.0))
    throw NumericalError("local_density_fluctuations: vanishing mean density");

  FluctuationEstimate est;
  est.mean_density = m1;
  est.normalized_variance = (m2 - m1 * m1) / (m1 * m1);
  est.benchmark_form = (m2 - m1) / (m1 * m1);

  // block the estimator itself for the error bar
  const std::size_t nb = std::min<std::size_t>(32, density.size() / 4);
  if (nb >= 4) {
    std::vector<double> block_vals;
    const std::size_t bs = density.size() / nb;
    for (std::size_t b = 0; b < nb; ++b) {
      double b1 = 0.0, b2 = 0.0;
      for (std::size_t i = b * bs; i < (b + 1) * bs; ++i) {
        b1 += density[i];
        b2 += density[i] * density[i];
      }
      b1 /= static_cast<double>(bs);
      b2 /= static_cast<double>(bs);
      if (b1 > 0.0) block_vals.push_back((b2 - b1 * b1) / (b1 * b1));
    }
    double bm = 0.0;
    for (double v : block_vals) bm += v;
    bm /= static_cast<double>(block_vals.size());
    double bv = 0.0;
    for (double v : block_vals) bv += (v - bm) * (v - bm);
    bv /= static_cast<double>(block_vals.size() - 1);
    est.error = std::sqrt(bv / static_cast<double>(block_vals.size()));
  }
  return est;
}

}  // namespace cf
