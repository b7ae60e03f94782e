#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cf/field.hpp"
#include "cf/sampler.hpp"

namespace cf {

// Flat dotted key-value run configuration.  Unknown keys are rejected so a
// typo in a physics parameter can never pass silently.
struct RunConfig {
  // model.*
  double atom_number = 500.0;
  double coupling = 0.0;
  double temperature = 0.0;  // ignored by `sweep`, which supplies its own list

  // sampler.*
  MoveParams move;
  long burn_in_sweeps = 2000;
  long sweeps = 20000;  // production sweeps after burn-in
  long thinning_sweeps = 10;
  int n_chains = 1;
  std::uint64_t base_seed = 1;

  // grid.*
  double extent_factor = 1.5;
  double oversample = 4.0;

  // gpe.*
  double gpe_dtau = 0.002;
  double gpe_tol = 1e-9;

  // sweep.*
  std::vector<double> sweep_temperatures;

  // output.*
  std::string out_dir = ".";

  void validate() const;  // throws ConfigError
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);  // IoError if unreadable

// FNV-1a over the raw config text; embedded in every emitted table.
std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace cf
