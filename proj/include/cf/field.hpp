#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cf/basis.hpp"

namespace cf {

// Working units: hbar*omega = m = k_B = 1.
struct ModelParams {
  double atom_number = 0.0;  // N
  double coupling = 0.0;     // g, oscillator energy x oscillator length
  double temperature = 0.0;  // T in hbar*omega/k_B
  int cutoff = 0;            // K, highest retained mode

  void validate() const;  // throws ConfigError
};

// Complex amplitudes alpha_0..alpha_K on the fixed-norm shell
// sum |alpha_n|^2 = N.
struct FieldConfiguration {
  std::vector<std::complex<double>> amplitudes;

  int cutoff() const { return static_cast<int>(amplitudes.size()) - 1; }
  double norm_squared() const;
};

struct EnergyBreakdown {
  double kinetic_potential = 0.0;  // sum n |alpha_n|^2
  double interaction = 0.0;        // (g/2) int |Psi|^4
  double total = 0.0;
};

double oscillator_energy(const FieldConfiguration& config);

double interaction_energy(const FieldConfiguration& config, const BasisTable& basis,
                          double coupling);

EnergyBreakdown total_energy(const FieldConfiguration& config, const BasisTable& basis,
                             const ModelParams& params);

// log of the unnormalized canonical weight, -E/T.  T = 0 is rejected; the
// sampler has a dedicated minimization mode for it.
double boltzmann_log_weight(double energy, double temperature);

}  // namespace cf
