#include "cf/idealgas.hpp"

#include <cmath>
#include <string>

#include "cf/errors.hpp"

namespace cf {

namespace {

struct GridMoments {
  double mean = 0.0;
  double second = 0.0;
};

GridMoments trapezoid_moments(const std::vector<double>& x, const std::vector<double>& f) {
  double z = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dx = x[i] - x[i - 1];
    z += 0.5 * (f[i] + f[i - 1]) * dx;
    m1 += 0.5 * (f[i] * x[i] + f[i - 1] * x[i - 1]) * dx;
    m2 += 0.5 * (f[i] * x[i] * x[i] + f[i - 1] * x[i - 1] * x[i - 1]) * dx;
  }
  return {m1 / z, m2 / z};
}

}  // namespace

double IdealGasDistribution::mean_excited() const {
  if (classical) return trapezoid_moments(grid, density).mean;
  double m = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) m += probabilities[k] * k;
  return m;
}

double IdealGasDistribution::variance_excited() const {
  if (classical) {
    const auto mom = trapezoid_moments(grid, density);
    return mom.second - mom.mean * mom.mean;
  }
  double m = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < probabilities.size(); ++k) {
    m += probabilities[k] * k;
    m2 += probabilities[k] * static_cast<double>(k) * static_cast<double>(k);
  }
  return m2 - m * m;
}

IdealGasDistribution exact_pnex(int atom_number, double temperature) {
  if (atom_number < 1) throw ConfigError("exact_pnex: N must be >= 1");
  if (!(temperature > 0.0)) throw ConfigError("exact_pnex: T must be > 0");
  const int n = atom_number;
  const double log_xi = -1.0 / temperature;

  // suffix[k] = sum_{l=k+1}^{N} log(1 - xi^l)
  std::vector<double> suffix(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = n - 1; k >= 0; --k) {
    const double log1m = std::log1p(-std::exp(log_xi * (k + 1)));
    suffix[static_cast<std::size_t>(k)] = suffix[static_cast<std::size_t>(k) + 1] + log1m;
  }

  IdealGasDistribution dist;
  dist.atom_number = n;
  dist.temperature = temperature;
  dist.xi = std::exp(log_xi);
  dist.probabilities.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    dist.probabilities[static_cast<std::size_t>(k)] =
        std::exp(k * log_xi + suffix[static_cast<std::size_t>(k)]);
  }
  return dist;
}

CondensateMoments exact_condensate_moments(int atom_number, double temperature) {
  const auto dist = exact_pnex(atom_number, temperature);
  CondensateMoments m;
  m.mean_n0 = atom_number - dist.mean_excited();
  m.variance = dist.variance_excited();  // Var(N0) = Var(N_ex) at fixed N
  return m;
}

double log_classical_partition(int atom_number, double temperature, int cutoff) {
  if (cutoff < 1) throw ConfigError("classical_partition: K must be >= 1");
  if (!(temperature > 0.0)) throw ConfigError("classical_partition: T must be > 0");
  if (atom_number < 1) throw ConfigError("classical_partition: N must be >= 1");
  const double log1m = std::log1p(-std::exp(-atom_number / temperature));
  return cutoff * (log1m + std::log(temperature)) - std::lgamma(cutoff + 1.0);
}

double classical_partition(int atom_number, double temperature, int cutoff) {
  return std::exp(log_classical_partition(atom_number, temperature, cutoff));
}

double log_excited_partition(double excited_number, double temperature, int cutoff) {
  if (cutoff < 2) throw ConfigError("excited_partition: K must be >= 2");
  if (!(temperature > 0.0)) throw ConfigError("excited_partition: T must be > 0");
  if (excited_number < 0.0) throw ConfigError("excited_partition: N_ex must be >= 0");
  if (excited_number == 0.0) return -INFINITY;
  const double log1m = std::log1p(-std::exp(-excited_number / temperature));
  return (cutoff - 1) * (log1m + std::log(temperature)) - std::lgamma(static_cast<double>(cutoff));
}

double excited_partition(double excited_number, double temperature, int cutoff) {
  return std::exp(log_excited_partition(excited_number, temperature, cutoff));
}

double classical_pnex_raw(double excited_number, int atom_number, double temperature,
                          int cutoff) {
  if (excited_number == 0.0) return 0.0;
  const double log_boltzmann = -excited_number / temperature;
  return std::exp(log_boltzmann + log_excited_partition(excited_number, temperature, cutoff) -
                  log_classical_partition(atom_number, temperature, cutoff));
}

IdealGasDistribution classical_pnex(int atom_number, double temperature, int cutoff,
                                    int grid_points) {
  if (grid_points < 3) throw ConfigError("classical_pnex: need >= 3 grid points");
  IdealGasDistribution dist;
  dist.atom_number = atom_number;
  dist.temperature = temperature;
  dist.xi = std::exp(-1.0 / temperature);
  dist.classical = true;
  dist.grid.resize(static_cast<std::size_t>(grid_points));
  dist.density.resize(static_cast<std::size_t>(grid_points));
  const double step = static_cast<double>(atom_number) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    dist.grid[static_cast<std::size_t>(i)] = i * step;
    dist.density[static_cast<std::size_t>(i)] =
        classical_pnex_raw(i * step, atom_number, temperature, cutoff);
  }
  // exact normalization over [0, N] removes the residual offset when the
  // cutoff is not tied to the temperature
  double z = 0.0;
  for (std::size_t i = 1; i < dist.grid.size(); ++i) {
    z += 0.5 * (dist.density[i] + dist.density[i - 1]) * step;
  }
  if (!(z > 0.0)) throw NumericalError("classical_pnex: density integrates to zero");
  for (auto& d : dist.density) d /= z;
  return dist;
}

// ---------------------------------------------------------------------------
// Brute-force phase-space integration (the oracle path).
//
// Integrating out n_0 (zero energy) leaves
//   Z(K, B) = G_1(B),  G_j(B) = int_0^B dt e^{-beta j t} G_{j+1}(B - t),
//   G_{K+1} = 1,
// evaluated by composite Gauss-Legendre per level with the G_{j+1} factor
// read from a Chebyshev tabulation built level by level.
// ---------------------------------------------------------------------------

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; mirrored).
constexpr double kGlNode[8] = {0.0950125098376374, 0.2816035507792589,
                               0.4580167776572274, 0.6178762444026438,
                               0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[8] = {0.1894506104550685, 0.1826034150449236,
                                 0.1691565193950025, 0.1495959888165767,
                                 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};

class ChebTable {
 public:
  ChebTable() = default;
  ChebTable(double hi, int count) : hi_(hi), nodes_(count), vals_(count), w_(count) {
    for (int k = 0; k < count; ++k) {
      const double a = (2.0 * k + 1.0) * M_PI / (2.0 * count);
      nodes_[static_cast<std::size_t>(k)] = 0.5 * hi_ * (1.0 + std::cos(a));
      w_[static_cast<std::size_t>(k)] = (k % 2 == 0 ? 1.0 : -1.0) * std::sin(a);
    }
  }
  const std::vector<double>& nodes() const { return nodes_; }
  void set(std::size_t k, double v) { vals_[k] = v; }

  double operator()(double x) const {
    if (x >= hi_) x = hi_;  // saturated tail
    if (x <= 0.0) return vals_.back() * 0.0 + value_at_zero();
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const double d = x - nodes_[k];
      if (std::abs(d) < 1e-13 * (hi_ + 1.0)) return vals_[k];
      const double q = w_[k] / d;
      num += q * vals_[k];
      den += q;
    }
    return num / den;
  }

 private:
  double value_at_zero() const {
    // barycentric evaluation at x = 0
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const double q = w_[k] / (0.0 - nodes_[k]);
      num += q * vals_[k];
      den += q;
    }
    return num / den;
  }
  double hi_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> vals_;
  std::vector<double> w_;
};

// Z for modes with energies 1..levels at continuous budget, by the nested
// quadrature above.  levels = 0 gives 1 (only the free n_0 remains).
double nested_partition(double budget, double temperature, int levels) {
  if (levels == 0) return 1.0;
  const double beta = 1.0 / temperature;
  const double hi = std::min(budget, 45.0 * temperature);

  auto integrate_level = [&](int j, double upper_budget, const ChebTable* next,
                             bool have_next) {
    const double t_cut = std::min(upper_budget, 45.0 * temperature / j);
    if (t_cut <= 0.0) return 0.0;
    const double panel = 5.0 * temperature / j;
    const int panels = std::min(64, static_cast<int>(std::ceil(t_cut / panel)));
    const double h = t_cut / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * h;
      double acc = 0.0;
      for (int q = 0; q < 8; ++q) {
        for (int sgn = -1; sgn <= 1; sgn += 2) {
          const double t = mid + sgn * 0.5 * h * kGlNode[q];
          const double rest = upper_budget - t;
          const double g = have_next ? (*next)(rest) : 1.0;
          acc += kGlWeight[q] * std::exp(-beta * j * t) * g;
        }
      }
      total += acc * 0.5 * h;
    }
    return total;
  };

  constexpr int kChebCount = 200;
  ChebTable table;
  bool have_table = false;
  for (int j = levels; j >= 2; --j) {
    ChebTable fresh(hi, kChebCount);
    for (std::size_t k = 0; k < fresh.nodes().size(); ++k) {
      fresh.set(k, integrate_level(j, fresh.nodes()[k], &table, have_table));
    }
    table = std::move(fresh);
    have_table = true;
  }
  return integrate_level(1, budget, &table, have_table);
}

}  // namespace

double brute_force_partition(int atom_number, double temperature, int cutoff) {
  if (cutoff < 1) throw ConfigError("brute_force_partition: K must be >= 1");
  if (cutoff > 5)
    throw ConfigError("brute_force_partition: K > 5 is too costly; use the closed form");
  if (!(temperature > 0.0)) throw ConfigError("brute_force_partition: T must be > 0");
  return nested_partition(static_cast<double>(atom_number), temperature, cutoff);
}

double brute_force_excited_density(double excited_number, int atom_number,
                                   double temperature, int cutoff) {
  if (cutoff < 2) throw ConfigError("brute_force_excited_density: K must be >= 2");
  if (cutoff > 5) throw ConfigError("brute_force_excited_density: K > 5 is too costly");
  if (excited_number < 0.0 || excited_number > atom_number)
    throw ConfigError("brute_force_excited_density: N_ex outside [0, N]");
  // Modes 1..K at budget N_ex: shifting every level down by one energy unit
  // factors out exp(-beta N_ex) and leaves the same nested integral with
  // K-1 excited levels.
  const double z = nested_partition(excited_number, temperature, cutoff - 1);
  return std::exp(-excited_number / temperature) * z /
         nested_partition(static_cast<double>(atom_number), temperature, cutoff);
}

}  // namespace cf
