#include "cf/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cf/errors.hpp"

namespace cf {

namespace {
constexpr long kRefreshInterval = 10000;  // accepted moves between cache rebuilds
constexpr std::uint64_t kChainStreamSalt = 0x517cc1b727220a95ULL;
}  // namespace

FieldConfiguration init_configuration(const ModelParams& params, InitMode mode, Rng& rng) {
  params.validate();
  FieldConfiguration config;
  config.amplitudes.assign(static_cast<std::size_t>(params.cutoff) + 1, {0.0, 0.0});
  if (mode == InitMode::ground) {
    config.amplitudes[0] = {std::sqrt(params.atom_number), 0.0};
    return config;
  }
  double norm2 = 0.0;
  for (auto& a : config.amplitudes) {
    a = {rng.normal(), rng.normal()};
    norm2 += std::norm(a);
  }
  const double scale = std::sqrt(params.atom_number / norm2);
  for (auto& a : config.amplitudes) a *= scale;
  return config;
}

TwoModeCandidate propose_two_mode_rotation(const FieldConfiguration& config,
                                           const MoveParams& mp, Rng& rng) {
  const int modes = static_cast<int>(config.amplitudes.size());
  if (modes < 2)
    throw ConfigError("propose_two_mode_rotation: single-mode system has no moves");

  TwoModeCandidate cand;
  cand.mode_a = rng.uniform_int(modes);
  cand.mode_b = rng.uniform_int(modes - 1);
  if (cand.mode_b >= cand.mode_a) ++cand.mode_b;
  cand.theta = rng.uniform(-mp.theta_scale, mp.theta_scale);
  cand.phi = rng.uniform(-mp.phase_scale, mp.phase_scale);

  const double c = std::cos(cand.theta);
  const double s = std::sin(cand.theta);
  const std::complex<double> e{std::cos(cand.phi), std::sin(cand.phi)};
  const auto a = config.amplitudes[static_cast<std::size_t>(cand.mode_a)];
  const auto b = config.amplitudes[static_cast<std::size_t>(cand.mode_b)];
  cand.new_a = c * a + e * s * b;
  cand.new_b = -std::conj(e) * s * a + c * b;
  return cand;
}

bool metropolis_accept(double delta_energy, double temperature, Rng& rng) {
  if (!(temperature > 0.0))
    throw ConfigError("metropolis_accept: T must be > 0");
  if (!std::isfinite(delta_energy))
    throw NumericalError("metropolis_accept: non-finite energy change (cache corruption?)");
  const double u = rng.uniform();
  if (delta_energy <= 0.0) return true;
  return u < std::exp(-delta_energy / temperature);
}

ChainState::ChainState(const ModelParams& params, const BasisTable& basis,
                       FieldConfiguration init, std::uint64_t seed)
    : params_(params), basis_(&basis), config_(std::move(init)), rng_(seed) {
  params_.validate();
  if (config_.cutoff() != params_.cutoff)
    throw ConfigError("ChainState: configuration cutoff does not match params");
  if (basis.max_mode != params_.cutoff)
    throw ConfigError("ChainState: basis cutoff does not match params");
  refresh_caches();
}

void ChainState::refresh_caches() {
  if (params_.coupling > 0.0) {
    profile_ = synthesize_profile(config_.amplitudes, *basis_);
    double q = 0.0;
    for (const auto& v : profile_) {
      const double n = std::norm(v);
      q += n * n;
    }
    quartic_ = q * basis_->grid.spacing;
  } else {
    profile_.clear();
    quartic_ = 0.0;
  }
  energy_.kinetic_potential = oscillator_energy(config_);
  energy_.interaction = 0.5 * params_.coupling * quartic_;
  energy_.total = energy_.kinetic_potential + energy_.interaction;
  accepted_since_refresh_ = 0;
}

bool ChainState::apply_candidate(const MoveParams& mp, bool thermal) {
  ++steps_;
  const auto cand = propose_two_mode_rotation(config_, mp, rng_);
  const auto ia = static_cast<std::size_t>(cand.mode_a);
  const auto ib = static_cast<std::size_t>(cand.mode_b);
  const auto old_a = config_.amplitudes[ia];
  const auto old_b = config_.amplitudes[ib];

  double delta = cand.mode_a * (std::norm(cand.new_a) - std::norm(old_a)) +
                 cand.mode_b * (std::norm(cand.new_b) - std::norm(old_b));
  double d_quartic = 0.0;
  const std::complex<double> da = cand.new_a - old_a;
  const std::complex<double> db = cand.new_b - old_b;
  if (params_.coupling > 0.0) {
    const std::size_t m = basis_->grid.size();
    const double* pa = basis_->values.data() + ia * m;
    const double* pb = basis_->values.data() + ib * m;
    const double dar = da.real(), dai = da.imag();
    const double dbr = db.real(), dbi = db.imag();
    for (std::size_t i = 0; i < m; ++i) {
      const double vr = profile_[i].real();
      const double vi = profile_[i].imag();
      const double wr = vr + dar * pa[i] + dbr * pb[i];
      const double wi = vi + dai * pa[i] + dbi * pb[i];
      const double n_old = vr * vr + vi * vi;
      const double n_new = wr * wr + wi * wi;
      d_quartic += n_new * n_new - n_old * n_old;
    }
    d_quartic *= basis_->grid.spacing;
    delta += 0.5 * params_.coupling * d_quartic;
  }

  if (!std::isfinite(delta))
    throw NumericalError("metropolis_step: non-finite delta-E at step " +
                         std::to_string(steps_));

  const bool accept =
      thermal ? metropolis_accept(delta, params_.temperature, rng_) : delta < 0.0;
  if (!accept) return false;

  config_.amplitudes[ia] = cand.new_a;
  config_.amplitudes[ib] = cand.new_b;
  if (params_.coupling > 0.0) {
    const std::size_t m = basis_->grid.size();
    const double* pa = basis_->values.data() + ia * m;
    const double* pb = basis_->values.data() + ib * m;
    for (std::size_t i = 0; i < m; ++i) {
      profile_[i] += da * pa[i] + db * pb[i];
    }
    quartic_ += d_quartic;
  }
  energy_.kinetic_potential += cand.mode_a * (std::norm(cand.new_a) - std::norm(old_a)) +
                               cand.mode_b * (std::norm(cand.new_b) - std::norm(old_b));
  energy_.interaction = 0.5 * params_.coupling * quartic_;
  energy_.total = energy_.kinetic_potential + energy_.interaction;
  ++accepted_;
  if (++accepted_since_refresh_ >= kRefreshInterval) refresh_caches();
  return true;
}

bool ChainState::metropolis_step(const MoveParams& mp) {
  if (!(params_.temperature > 0.0))
    throw ConfigError("metropolis_step: T must be > 0 (use descent_step at T = 0)");
  return apply_candidate(mp, true);
}

bool ChainState::descent_step(const MoveParams& mp) { return apply_candidate(mp, false); }

SampleStream run_chain(const ModelParams& params, const BasisTable& basis,
                       const MoveParams& mp, long total_sweeps, long burn_in_sweeps,
                       long thinning_sweeps, std::uint64_t seed, InitMode init) {
  params.validate();
  if (!(params.temperature > 0.0))
    throw ConfigError("run_chain: T must be > 0 (use minimize_energy at T = 0)");
  if (params.cutoff < 1) throw ConfigError("run_chain: K = 0 leaves no moves");
  if (burn_in_sweeps < 0 || total_sweeps <= burn_in_sweeps)
    throw ConfigError("run_chain: need total_sweeps > burn_in_sweeps >= 0");
  if (thinning_sweeps < 1) throw ConfigError("run_chain: thinning must be >= 1");
  if (!(mp.theta_scale > 0.0 && mp.theta_scale <= M_PI_2))
    throw ConfigError("run_chain: theta_scale must be in (0, pi/2]");
  if (!(mp.target_acceptance > 0.0 && mp.target_acceptance < 1.0))
    throw ConfigError("run_chain: target_acceptance must be in (0, 1)");

  Rng init_rng(seed);
  auto config = init_configuration(params, init, init_rng);
  ChainState chain(params, basis, std::move(config), seed ^ kChainStreamSalt);

  MoveParams live = mp;
  const long proposals_per_sweep = params.cutoff + 1;
  long window_steps = 0, window_accepts = 0;

  SampleStream stream;
  stream.meta.params = params;
  stream.meta.move = mp;
  stream.meta.seed = seed;
  stream.meta.total_sweeps = total_sweeps;
  stream.meta.burn_in_sweeps = burn_in_sweeps;
  stream.meta.thinning_sweeps = thinning_sweeps;
  stream.meta.init = init;
  stream.snapshots.reserve(
      static_cast<std::size_t>((total_sweeps - burn_in_sweeps) / thinning_sweeps));

  for (long sweep = 1; sweep <= total_sweeps; ++sweep) {
    const bool adapting = sweep <= burn_in_sweeps;
    for (long p = 0; p < proposals_per_sweep; ++p) {
      const bool accepted = chain.metropolis_step(live);
      if (adapting) {
        ++window_steps;
        if (accepted) ++window_accepts;
        if (window_steps >= live.adaptation_interval) {
          const double rate =
              static_cast<double>(window_accepts) / static_cast<double>(window_steps);
          live.theta_scale *= std::exp(rate - live.target_acceptance);
          live.theta_scale = std::clamp(live.theta_scale, 1e-5, M_PI_2);
          window_steps = window_accepts = 0;
        }
      }
    }
    if (!adapting && (sweep - burn_in_sweeps) % thinning_sweeps == 0) {
      stream.snapshots.push_back({chain.config().amplitudes, chain.energy()});
    }
  }
  stream.meta.adapted_theta_scale = live.theta_scale;

  // End-of-stream invariants: norm drift and cache consistency.
  const double norm2 = chain.config().norm_squared();
  if (std::abs(norm2 - params.atom_number) > 1e-6 * params.atom_number)
    throw NumericalError("run_chain: norm drift " + std::to_string(norm2 - params.atom_number));
  const double cached = chain.energy().total;
  chain.refresh_caches();
  const double fresh = chain.energy().total;
  if (std::abs(fresh - cached) > 1e-7 * (std::abs(fresh) + 1.0))
    throw NumericalError("run_chain: energy cache drift " + std::to_string(fresh - cached));

  return stream;
}

SampleStream merge_streams(std::vector<SampleStream> streams) {
  if (streams.empty()) throw ConfigError("merge_streams: no streams");
  SampleStream merged = std::move(streams.front());
  for (std::size_t i = 1; i < streams.size(); ++i) {
    auto& s = streams[i];
    merged.snapshots.insert(merged.snapshots.end(),
                            std::make_move_iterator(s.snapshots.begin()),
                            std::make_move_iterator(s.snapshots.end()));
    merged.meta.total_sweeps += s.meta.total_sweeps;
  }
  return merged;
}

FieldConfiguration minimize_energy(const ModelParams& params, const BasisTable& basis,
                                   const MoveParams& mp, long sweeps, std::uint64_t seed) {
  params.validate();
  if (params.cutoff < 1) {
    // Single-mode system: the only configuration is all atoms in mode 0.
    FieldConfiguration c;
    c.amplitudes = {{std::sqrt(params.atom_number), 0.0}};
    return c;
  }
  if (sweeps < 1) throw ConfigError("minimize_energy: sweeps must be >= 1");

  Rng init_rng(seed);
  auto config = init_configuration(params, InitMode::ground, init_rng);
  ChainState chain(params, basis, std::move(config), seed ^ kChainStreamSalt);

  MoveParams live = mp;
  const double theta_start = mp.theta_scale;
  const double theta_end = 1e-4;
  const long proposals_per_sweep = params.cutoff + 1;

  FieldConfiguration best = chain.config();
  double best_energy = chain.energy().total;

  for (long sweep = 0; sweep < sweeps; ++sweep) {
    const double frac = sweeps > 1 ? static_cast<double>(sweep) / (sweeps - 1) : 1.0;
    live.theta_scale = theta_start * std::pow(theta_end / theta_start, frac);
    for (long p = 0; p < proposals_per_sweep; ++p) chain.descent_step(live);
    if (chain.energy().total < best_energy) {
      best_energy = chain.energy().total;
      best = chain.config();
    }
  }
  return best;
}

}  // namespace cf
