#include "cf/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <mutex>
#include <thread>

#include "cf/errors.hpp"
#include "cf/idealgas.hpp"

namespace cf {

namespace {

constexpr const char* kVersion = "cf1d 1.0.0";

int gpe_mode_count(double mu) {
  return std::max(60, static_cast<int>(std::ceil(2.5 * mu)) + 20);
}

// fwhm over a half-profile symmetric about x = 0
double mirrored_fwhm(std::span<const double> x, std::span<const double> y) {
  std::vector<double> fx, fy;
  fx.reserve(2 * x.size());
  fy.reserve(2 * x.size());
  for (std::size_t i = x.size(); i-- > 1;) {
    fx.push_back(-x[i]);
    fy.push_back(y[i]);
  }
  fx.insert(fx.end(), x.begin(), x.end());
  fy.insert(fy.end(), y.begin(), y.end());
  return fwhm(fx, fy);
}

ModelParams point_params(const RunConfig& cfg, double temperature, int cutoff) {
  ModelParams p;
  p.atom_number = cfg.atom_number;
  p.coupling = cfg.coupling;
  p.temperature = temperature;
  p.cutoff = cutoff;
  p.validate();
  return p;
}

}  // namespace

int worker_count(int n_chains) {
  int w = 0;
  if (const char* env = std::getenv("CF1D_WORKERS")) {
    w = std::atoi(env);
    if (w < 1) throw ConfigError("CF1D_WORKERS must be a positive integer");
  } else {
    w = static_cast<int>(std::thread::hardware_concurrency());
    if (w < 1) w = 1;
  }
  return std::min(w, std::max(1, n_chains));
}

double run_mu(const RunConfig& cfg) {
  if (cfg.coupling == 0.0) return 0.0;
  ModelParams params;
  params.atom_number = cfg.atom_number;
  params.coupling = cfg.coupling;
  params.temperature = 0.0;
  params.cutoff = 0;
  const double mu_guess = thomas_fermi_mu(cfg.atom_number, cfg.coupling);
  const Grid grid = build_grid(gpe_mode_count(mu_guess), cfg.extent_factor, cfg.oversample);
  return imaginary_time_ground_state(params, grid, cfg.gpe_dtau, cfg.gpe_tol).mu;
}

SampleStream sample_chains(const ModelParams& params, const BasisTable& basis,
                           const RunConfig& cfg) {
  const int n = cfg.n_chains;
  std::vector<SampleStream> streams(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&]() {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= n) return;
      try {
        streams[static_cast<std::size_t>(c)] = run_chain(
            params, basis, cfg.move, cfg.burn_in_sweeps + cfg.sweeps, cfg.burn_in_sweeps,
            cfg.thinning_sweeps, cfg.base_seed + static_cast<std::uint64_t>(c));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const int workers = worker_count(n);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return merge_streams(std::move(streams));
}

PointResult run_point(const RunConfig& cfg, double temperature, double mu) {
  const CutoffResult kc = cutoff_for(temperature, mu);
  if (kc.flagged) throw ConfigError("run_point: cutoff K = 0, no dynamics possible");

  PointResult res;
  res.temperature = temperature;
  res.cutoff = kc.cutoff;
  res.mu = mu;

  const ModelParams params = point_params(cfg, temperature, kc.cutoff);
  const Grid grid = build_grid(kc.cutoff, cfg.extent_factor, cfg.oversample);
  const BasisTable basis = build_basis(kc.cutoff, grid);

  const SampleStream merged = sample_chains(params, basis, cfg);
  res.snapshots = static_cast<long>(merged.snapshots.size());

  const DensityMatrix rho = accumulate_density_matrix(merged);
  const CondensateDecomposition dec = diagonalize(rho);
  const std::vector<double> n0 = occupation_series(merged, dec.condensate_vector());
  res.occupation = occupation_statistics(n0, params.atom_number);
  res.correlation = g1_profile(rho, basis);
  res.center_fluctuation = local_density_fluctuations(merged, basis, 0.0);
  try {
    res.fwhm_g1 = mirrored_fwhm(res.correlation.x, res.correlation.g1);
    res.fwhm_density = mirrored_fwhm(res.correlation.x, res.correlation.condensate_density);
    res.fwhm_ok = true;
  } catch (const std::exception&) {
    res.fwhm_ok = false;
  }
  return res;
}

SweepResult run_sweep(const RunConfig& cfg) {
  if (cfg.sweep_temperatures.size() < 2)
    throw ConfigError("sweep needs at least two temperatures");
  SweepResult res;
  res.mu = run_mu(cfg);
  for (double t : cfg.sweep_temperatures) res.points.push_back(run_point(cfg, t, res.mu));

  if (res.points.size() >= 3) {
    std::vector<double> temps, vars, errs;
    for (const auto& p : res.points) {
      temps.push_back(p.temperature);
      vars.push_back(p.occupation.variance);
      errs.push_back(p.occupation.variance_error);
    }
    res.crossover = crossover_temperature(temps, vars, errs);
    res.crossover_valid = !res.crossover.at_edge;
  }
  return res;
}

Provenance make_provenance(const std::string& config_text) {
  Provenance p;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a_hash(config_text)));
  p.config_hash = buf;
  p.version = kVersion;
  const std::time_t now = std::time(nullptr);
  char ts[64];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  p.timestamp = ts;
  return p;
}

void stamp(ResultTable& table, const Provenance& prov) {
  table.add_meta("config_hash", prov.config_hash);
  table.add_meta("version", prov.version);
  table.add_meta("generated", prov.timestamp);
}

ResultTable summary_table(const std::vector<PointResult>& points, const RunConfig& cfg) {
  ResultTable t;
  t.add_meta("atoms", std::to_string(cfg.atom_number));
  t.add_meta("coupling", std::to_string(cfg.coupling));
  t.add_column("temperature", "hw");
  t.add_column("cutoff");
  t.add_column("mu", "hw");
  t.add_column("n0_fraction");
  t.add_column("n0_fraction_err");
  t.add_column("n0_variance");
  t.add_column("n0_variance_err");
  t.add_column("center_fluct");
  t.add_column("center_fluct_err");
  t.add_column("center_fluct_benchmark");
  t.add_column("fwhm_g1", "aho");
  t.add_column("fwhm_density", "aho");
  t.add_column("snapshots");
  for (const auto& p : points) {
    const double n = cfg.atom_number;
    t.add_row({p.temperature, static_cast<double>(p.cutoff), p.mu, p.occupation.mean / n,
               p.occupation.mean_error / n, p.occupation.variance,
               p.occupation.variance_error, p.center_fluctuation.normalized_variance,
               p.center_fluctuation.error, p.center_fluctuation.benchmark_form,
               p.fwhm_ok ? p.fwhm_g1 : -1.0, p.fwhm_ok ? p.fwhm_density : -1.0,
               static_cast<double>(p.snapshots)});
  }
  return t;
}

ResultTable histogram_table(const PointResult& point, const RunConfig& cfg) {
  ResultTable t;
  t.add_meta("temperature", std::to_string(point.temperature));
  t.add_meta("cutoff", std::to_string(point.cutoff));
  const Histogram& h = point.occupation.excited_histogram;
  const bool ideal = cfg.coupling == 0.0;
  t.add_column("nex_center");
  t.add_column("n0_center");
  t.add_column("sampled_density");
  if (ideal) {
    t.add_column("exact_density");
    t.add_column("classical_density");
  }
  const int n_atoms = static_cast<int>(std::lround(cfg.atom_number));

  IdealGasDistribution exact, classical;
  if (ideal) {
    exact = exact_pnex(n_atoms, point.temperature);
    classical = classical_pnex(n_atoms, point.temperature, point.cutoff);
  }
  auto lerp_classical = [&](double nex) {
    const double step = classical.grid[1] - classical.grid[0];
    const double pos = nex / step;
    const auto i = static_cast<std::size_t>(std::clamp(
        pos, 0.0, static_cast<double>(classical.grid.size() - 2)));
    const double frac = pos - static_cast<double>(i);
    return classical.density[i] * (1.0 - frac) + classical.density[i + 1] * frac;
  };
  auto lerp_exact = [&](double nex) {
    const double pos = std::clamp(nex, 0.0, static_cast<double>(n_atoms));
    const auto i = static_cast<std::size_t>(std::min(
        static_cast<double>(n_atoms - 1), std::floor(pos)));
    const double frac = pos - static_cast<double>(i);
    return exact.probabilities[i] * (1.0 - frac) + exact.probabilities[i + 1] * frac;
  };

  for (std::size_t b = 0; b + 1 < h.edges.size(); ++b) {
    const double c = 0.5 * (h.edges[b] + h.edges[b + 1]);
    std::vector<double> row{c, cfg.atom_number - c, h.density[b]};
    if (ideal) {
      row.push_back(lerp_exact(c));
      row.push_back(lerp_classical(c));
    }
    t.add_row(row);
  }
  return t;
}

ResultTable g1_table(const PointResult& point) {
  ResultTable t;
  t.add_meta("temperature", std::to_string(point.temperature));
  t.add_meta("condensate_occupation", std::to_string(point.correlation.condensate_occupation));
  t.add_column("x", "aho");
  t.add_column("g1");
  t.add_column("condensate_density");
  for (std::size_t i = 0; i < point.correlation.x.size(); ++i) {
    t.add_row({point.correlation.x[i], point.correlation.g1[i],
               point.correlation.condensate_density[i]});
  }
  return t;
}

ResultTable ideal_reference_table(int atom_number, double temperature, int cutoff) {
  const IdealGasDistribution exact = exact_pnex(atom_number, temperature);
  const IdealGasDistribution classical = classical_pnex(atom_number, temperature, cutoff,
                                                        std::max(atom_number * 4 + 1, 2001));
  ResultTable t;
  t.add_meta("atoms", std::to_string(atom_number));
  t.add_meta("temperature", std::to_string(temperature));
  t.add_meta("cutoff", std::to_string(cutoff));
  t.add_meta("note", "exact_probability is a discrete distribution; classical_density is "
                     "a continuous density over the same axis");
  t.add_column("nex");
  t.add_column("n0");
  t.add_column("exact_probability");
  t.add_column("classical_density");
  const double step = classical.grid[1] - classical.grid[0];
  for (int k = 0; k <= atom_number; ++k) {
    const double pos = k / step;
    const auto i = static_cast<std::size_t>(std::clamp(
        pos, 0.0, static_cast<double>(classical.grid.size() - 2)));
    const double frac = pos - static_cast<double>(i);
    const double cdens = classical.density[i] * (1.0 - frac) + classical.density[i + 1] * frac;
    t.add_row({static_cast<double>(k), static_cast<double>(atom_number - k),
               exact.probabilities[static_cast<std::size_t>(k)], cdens});
  }
  return t;
}

ResultTable ground_profile_table(const RunConfig& cfg, long minimize_sweeps) {
  const bool interacting = cfg.coupling > 0.0;
  const double mu_guess = interacting ? thomas_fermi_mu(cfg.atom_number, cfg.coupling) : 0.5;
  const int modes = gpe_mode_count(mu_guess);
  const Grid grid = build_grid(modes, cfg.extent_factor, cfg.oversample);

  ModelParams params;
  params.atom_number = cfg.atom_number;
  params.coupling = cfg.coupling;
  params.temperature = 0.0;
  params.cutoff = interacting ? static_cast<int>(std::ceil(mu_guess)) + 20 : 10;

  const BasisTable basis = build_basis(params.cutoff, grid);
  const FieldConfiguration ground =
      minimize_energy(params, basis, cfg.move, minimize_sweeps, cfg.base_seed);
  const auto profile = synthesize_profile(ground.amplitudes, basis);

  ResultTable t;
  t.add_meta("atoms", std::to_string(cfg.atom_number));
  t.add_meta("coupling", std::to_string(cfg.coupling));
  t.add_column("x", "aho");
  t.add_column("density_minimized");
  if (interacting) {
    const GroundState gs =
        imaginary_time_ground_state(params, grid, cfg.gpe_dtau, cfg.gpe_tol);
    t.add_meta("mu", std::to_string(gs.mu));
    t.add_column("density_gpe");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      t.add_row({grid.points[i], std::norm(profile[i]), gs.psi[i] * gs.psi[i]});
    }
  } else {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      t.add_row({grid.points[i], std::norm(profile[i])});
    }
  }
  return t;
}

}  // namespace cf
