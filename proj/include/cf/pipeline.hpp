#pragma once

#include <string>
#include <vector>

#include "cf/analysis.hpp"
#include "cf/config.hpp"
#include "cf/gpe.hpp"
#include "cf/table.hpp"

namespace cf {

// Shared orchestration used by the CLI subcommands and the acceptance suite:
// gpe -> cutoff -> chains -> merge -> analysis -> tables.

// Worker threads for the chain pool; CF1D_WORKERS overrides the detected
// hardware concurrency.
int worker_count(int n_chains);

// mu entering the cutoff rule: 0 for g = 0, otherwise from the converged
// imaginary-time ground state at the run's (N, g).
double run_mu(const RunConfig& cfg);

// n_chains independent chains at seeds base_seed + index, merged.
SampleStream sample_chains(const ModelParams& params, const BasisTable& basis,
                           const RunConfig& cfg);

struct PointResult {
  double temperature = 0.0;
  int cutoff = 0;
  double mu = 0.0;
  long snapshots = 0;
  OccupationStats occupation;
  CorrelationProfile correlation;
  FluctuationEstimate center_fluctuation;
  double fwhm_g1 = 0.0;
  double fwhm_density = 0.0;
  bool fwhm_ok = false;  // false when a half-maximum crossing is off-grid
};

PointResult run_point(const RunConfig& cfg, double temperature, double mu);

struct SweepResult {
  double mu = 0.0;
  std::vector<PointResult> points;
  CrossoverEstimate crossover;
  bool crossover_valid = false;
};

SweepResult run_sweep(const RunConfig& cfg);

// Provenance stamped into every emitted table.
struct Provenance {
  std::string config_hash;  // hex FNV-1a of the raw config text
  std::string version;
  std::string timestamp;  // excluded from determinism comparisons
};

Provenance make_provenance(const std::string& config_text);
void stamp(ResultTable& table, const Provenance& prov);

ResultTable summary_table(const std::vector<PointResult>& points, const RunConfig& cfg);
ResultTable histogram_table(const PointResult& point, const RunConfig& cfg);
ResultTable g1_table(const PointResult& point);
ResultTable ideal_reference_table(int atom_number, double temperature, int cutoff);

// T = 0 density profiles: stochastic minimizer vs imaginary-time solution
// (the latter only for g > 0).
ResultTable ground_profile_table(const RunConfig& cfg, long minimize_sweeps = 4000);

}  // namespace cf
