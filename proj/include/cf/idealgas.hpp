#pragma once

#include <vector>

namespace cf {

// Exact reference distributions for the trapped 1D ideal Bose gas in the
// canonical ensemble.  All closed forms are evaluated in log space so that
// N ~ 500 and K ~ 60 stay inside double range.

struct IdealGasDistribution {
  int atom_number = 0;
  double temperature = 0.0;
  double xi = 0.0;  // exp(-1/T)
  bool classical = false;

  // quantum: probabilities[N_ex] for N_ex = 0..N, sums to 1
  std::vector<double> probabilities;

  // classical: density over grid of N_ex in [0, N], numerically normalized
  std::vector<double> grid;
  std::vector<double> density;

  double mean_excited() const;
  double variance_excited() const;
};

// P(N_ex) = xi^{N_ex} prod_{l=N_ex+1}^{N} (1 - xi^l).
IdealGasDistribution exact_pnex(int atom_number, double temperature);

struct CondensateMoments {
  double mean_n0 = 0.0;
  double variance = 0.0;
};

CondensateMoments exact_condensate_moments(int atom_number, double temperature);

// Z = (1/K!) ((1 - xi^N) T)^K.
double log_classical_partition(int atom_number, double temperature, int cutoff);
double classical_partition(int atom_number, double temperature, int cutoff);

// Z_ex = (1/(K-1)!) ((1 - xi^{N_ex}) T)^{K-1}.
double log_excited_partition(double excited_number, double temperature, int cutoff);
double excited_partition(double excited_number, double temperature, int cutoff);

// Unnormalized classical density of N_ex: xi^{N_ex} Z_ex(N_ex) / Z(N).
// The Boltzmann factor xi^{N_ex} comes from referring the excited-mode
// energies to the lowest excited level; without it the ratio of partition
// functions alone is not a probability density.
double classical_pnex_raw(double excited_number, int atom_number, double temperature,
                          int cutoff);

// Density tabulated on a uniform N_ex grid and renormalized to integrate
// to one over [0, N].
IdealGasDistribution classical_pnex(int atom_number, double temperature, int cutoff,
                                    int grid_points = 2001);

// Direct numerical evaluation of the constrained phase-space integral
//   Z = int dn_0..dn_K exp(-beta sum_j j n_j) delta(sum_j n_j - N)
// by nested adaptive quadrature; the independent oracle for the closed form.
// Cost grows exponentially with K; rejected for K > 5.
double brute_force_partition(int atom_number, double temperature, int cutoff);

// Same nested integral restricted to modes 1..K at budget N_ex: the
// unnormalized marginal density of N_ex, oracle for classical_pnex_raw.
double brute_force_excited_density(double excited_number, int atom_number,
                                   double temperature, int cutoff);

}  // namespace cf
