#include "cf/field.hpp"

#include <cmath>

#include "cf/errors.hpp"

namespace cf {

void ModelParams::validate() const {
  if (!(atom_number > 0.0)) throw ConfigError("ModelParams: atom_number must be > 0");
  if (coupling < 0.0) throw ConfigError("ModelParams: coupling must be >= 0");
  if (temperature < 0.0) throw ConfigError("ModelParams: temperature must be >= 0");
  if (cutoff < 0) throw ConfigError("ModelParams: cutoff must be >= 0");
}

double FieldConfiguration::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return s;
}

double oscillator_energy(const FieldConfiguration& config) {
  double e = 0.0;
  for (std::size_t n = 1; n < config.amplitudes.size(); ++n) {
    e += static_cast<double>(n) * std::norm(config.amplitudes[n]);
  }
  return e;
}

double interaction_energy(const FieldConfiguration& config, const BasisTable& basis,
                          double coupling) {
  if (coupling == 0.0) return 0.0;
  const auto psi = synthesize_profile(config.amplitudes, basis);
  double q = 0.0;
  for (const auto& v : psi) {
    const double n = std::norm(v);
    q += n * n;
  }
  return 0.5 * coupling * q * basis.grid.spacing;
}

EnergyBreakdown total_energy(const FieldConfiguration& config, const BasisTable& basis,
                             const ModelParams& params) {
  EnergyBreakdown e;
  e.kinetic_potential = oscillator_energy(config);
  e.interaction = interaction_energy(config, basis, params.coupling);
  e.total = e.kinetic_potential + e.interaction;
  return e;
}

double boltzmann_log_weight(double energy, double temperature) {
  if (!(temperature > 0.0))
    throw ConfigError("boltzmann_log_weight: T must be > 0 (use minimization mode at T = 0)");
  return -energy / temperature;
}

}  // namespace cf
