#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cf/basis.hpp"
#include "cf/field.hpp"
#include "cf/rng.hpp"

namespace cf {

enum class InitMode { ground, thermal_random };

struct MoveParams {
  double theta_scale = 0.3;         // typical rotation angle, (0, pi/2]
  double phase_scale = M_PI;        // typical phase kick
  double target_acceptance = 0.5;   // burn-in adaptation target
  int adaptation_interval = 250;    // proposals between scale updates
};

// ground: all atoms in mode 0; thermal_random: i.i.d. complex Gaussian
// amplitudes rescaled onto the norm shell.
FieldConfiguration init_configuration(const ModelParams& params, InitMode mode, Rng& rng);

struct TwoModeCandidate {
  int mode_a = 0;
  int mode_b = 0;
  std::complex<double> new_a;
  std::complex<double> new_b;
  double theta = 0.0;
  double phi = 0.0;
};

// Norm-preserving unitary rotation of a random mode pair:
//   a' =  cos(t) a + e^{i p} sin(t) b
//   b' = -e^{-i p} sin(t) a + cos(t) b
// Symmetric proposal; throws if the configuration has a single mode.
TwoModeCandidate propose_two_mode_rotation(const FieldConfiguration& config,
                                           const MoveParams& mp, Rng& rng);

// The Metropolis accept rule; exposed separately so the acceptance
// probability can be tested directly.  Consumes exactly one uniform draw.
bool metropolis_accept(double delta_energy, double temperature, Rng& rng);

// A single chain owns all of its mutable state: configuration, cached
// spatial profile and energy, RNG, counters.
class ChainState {
 public:
  ChainState(const ModelParams& params, const BasisTable& basis,
             FieldConfiguration init, std::uint64_t seed);

  const ModelParams& params() const { return params_; }
  const BasisTable& basis() const { return *basis_; }
  const FieldConfiguration& config() const { return config_; }
  const EnergyBreakdown& energy() const { return energy_; }
  const std::vector<std::complex<double>>& profile() const { return profile_; }
  Rng& rng() { return rng_; }

  long steps() const { return steps_; }
  long accepted() const { return accepted_; }
  double acceptance_rate() const {
    return steps_ > 0 ? static_cast<double>(accepted_) / static_cast<double>(steps_) : 0.0;
  }

  // Full resynthesis of the profile and energy caches.
  void refresh_caches();

  // One proposal + accept/reject; returns whether the move was accepted.
  // delta-E comes from the cached profile; non-finite delta-E aborts.
  bool metropolis_step(const MoveParams& mp);

  // T = 0 variant: accept only strictly downhill moves.
  bool descent_step(const MoveParams& mp);

 private:
  bool apply_candidate(const MoveParams& mp, bool thermal);

  ModelParams params_;
  const BasisTable* basis_;
  FieldConfiguration config_;
  std::vector<std::complex<double>> profile_;  // empty when coupling == 0
  double quartic_ = 0.0;                       // int |Psi|^4 dx
  EnergyBreakdown energy_;
  Rng rng_;
  long steps_ = 0;
  long accepted_ = 0;
  long accepted_since_refresh_ = 0;
};

struct StreamMeta {
  ModelParams params;
  MoveParams move;
  std::uint64_t seed = 0;
  long total_sweeps = 0;     // including burn-in; 1 sweep = K+1 proposals
  long burn_in_sweeps = 0;
  long thinning_sweeps = 1;
  InitMode init = InitMode::thermal_random;
  double adapted_theta_scale = 0.0;  // frozen value used after burn-in
};

struct Snapshot {
  std::vector<std::complex<double>> amplitudes;
  EnergyBreakdown energy;
};

struct SampleStream {
  StreamMeta meta;
  std::vector<Snapshot> snapshots;
};

// Deterministic given the seed.  theta_scale adapts toward
// target_acceptance during burn-in only, then freezes.
SampleStream run_chain(const ModelParams& params, const BasisTable& basis,
                       const MoveParams& mp, long total_sweeps, long burn_in_sweeps,
                       long thinning_sweeps, std::uint64_t seed,
                       InitMode init = InitMode::thermal_random);

// Concatenates snapshots; downstream accumulators are order-independent.
SampleStream merge_streams(std::vector<SampleStream> streams);

// Stochastic minimizer of the energy functional on the norm shell:
// downhill-only acceptance with geometrically annealed theta_scale.
// Returns the lowest-energy configuration visited.
FieldConfiguration minimize_energy(const ModelParams& params, const BasisTable& basis,
                                   const MoveParams& mp, long sweeps, std::uint64_t seed);

}  // namespace cf
