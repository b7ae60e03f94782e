#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cf/analysis.hpp"
#include "cf/config.hpp"
#include "cf/errors.hpp"
#include "cf/gpe.hpp"
#include "cf/idealgas.hpp"
#include "cf/pipeline.hpp"
#include "cf/table.hpp"

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cf::IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string temp_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw cf::IoError("cannot create output directory '" + dir + "'");
}

void write_table(cf::ResultTable table, const cf::Provenance& prov,
                 const std::string& path) {
  cf::stamp(table, prov);
  table.write_file(path);
  std::cout << "wrote " << path << '\n';
}

struct Overrides {
  std::string out_dir;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int chains = 0;
  std::string temps;
};

cf::RunConfig load_config(const std::string& path, const Overrides& ov,
                          std::string* raw_text) {
  *raw_text = read_text_file(path);
  cf::RunConfig cfg = cf::parse_config_text(*raw_text);
  if (!ov.out_dir.empty()) cfg.out_dir = ov.out_dir;
  if (ov.has_seed) cfg.base_seed = ov.seed;
  if (ov.chains > 0) cfg.n_chains = ov.chains;
  if (!ov.temps.empty()) {
    cfg.sweep_temperatures.clear();
    std::stringstream ss(ov.temps);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) cfg.sweep_temperatures.push_back(std::stod(item));
    }
  }
  cfg.validate();
  return cfg;
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
  std::string raw;
  const cf::RunConfig cfg = load_config(config_path, ov, &raw);
  if (!(cfg.temperature > 0.0))
    throw cf::ConfigError("run: model.temperature must be > 0");
  const cf::Provenance prov = cf::make_provenance(raw);
  ensure_dir(cfg.out_dir);

  const double mu = cf::run_mu(cfg);
  const cf::PointResult point = cf::run_point(cfg, cfg.temperature, mu);

  write_table(cf::summary_table({point}, cfg), prov, cfg.out_dir + "/summary.tsv");
  write_table(cf::histogram_table(point, cfg), prov, cfg.out_dir + "/nex_hist.tsv");
  write_table(cf::g1_table(point), prov, cfg.out_dir + "/g1.tsv");
  write_table(cf::ground_profile_table(cfg), prov, cfg.out_dir + "/ground.tsv");
  return 0;
}

int cmd_sweep(const std::string& config_path, const Overrides& ov) {
  std::string raw;
  const cf::RunConfig cfg = load_config(config_path, ov, &raw);
  const cf::Provenance prov = cf::make_provenance(raw);
  ensure_dir(cfg.out_dir);

  const cf::SweepResult res = cf::run_sweep(cfg);
  cf::ResultTable summary = cf::summary_table(res.points, cfg);
  summary.add_meta("mu", std::to_string(res.mu));
  if (res.crossover_valid) {
    summary.add_meta("t_star", std::to_string(res.crossover.t_star));
    summary.add_meta("t_star_err", std::to_string(res.crossover.t_star_error));
  }
  write_table(std::move(summary), prov, cfg.out_dir + "/summary.tsv");
  for (const auto& p : res.points) {
    const std::string tag = temp_tag(p.temperature);
    write_table(cf::histogram_table(p, cfg), prov,
                cfg.out_dir + "/nex_hist_T" + tag + ".tsv");
    write_table(cf::g1_table(p), prov, cfg.out_dir + "/g1_T" + tag + ".tsv");
  }
  return 0;
}

int cmd_ideal_ref(int atoms, double temp, int cutoff, const std::string& out_dir) {
  ensure_dir(out_dir);
  const cf::Provenance prov = cf::make_provenance(
      "ideal-ref atoms=" + std::to_string(atoms) + " temp=" + std::to_string(temp) +
      " cutoff=" + std::to_string(cutoff));
  write_table(cf::ideal_reference_table(atoms, temp, cutoff), prov,
              out_dir + "/ideal_ref.tsv");
  return 0;
}

int cmd_gpe(double atoms, double coupling, double temp) {
  cf::ModelParams params;
  params.atom_number = atoms;
  params.coupling = coupling;
  params.temperature = 0.0;
  params.cutoff = 0;
  const double mu_guess = coupling > 0.0 ? cf::thomas_fermi_mu(atoms, coupling) : 0.5;
  const int modes = std::max(60, static_cast<int>(std::ceil(2.5 * mu_guess)) + 20);
  const cf::Grid grid = cf::build_grid(modes);
  const cf::GroundState gs = cf::imaginary_time_ground_state(params, grid);
  std::cout << "mu = " << gs.mu << '\n'
            << "energy = " << gs.energy << '\n'
            << "iterations = " << gs.iterations << '\n'
            << "residual = " << gs.residual << '\n';
  if (coupling > 0.0)
    std::cout << "mu_thomas_fermi = " << cf::thomas_fermi_mu(atoms, coupling) << '\n';
  if (temp >= 0.0) {
    const cf::CutoffResult kc = cf::cutoff_for(temp, gs.mu);
    std::cout << "cutoff(T=" << temp << ") = " << kc.cutoff
              << (kc.flagged ? " (flagged: no dynamics)" : "") << '\n';
  }
  return 0;
}

struct Check {
  std::string name;
  bool ok;
};

int cmd_check(bool fast) {
  std::vector<Check> checks;
  auto add = [&](const std::string& name, bool ok) {
    checks.push_back({name, ok});
    std::cout << (ok ? "ok  " : "FAIL") << "  " << name << '\n';
  };

  {
    const cf::Grid grid = cf::build_grid(60);
    bool ok = true;
    try {
      cf::build_basis(60, grid);
    } catch (const std::exception&) {
      ok = false;
    }
    add("basis orthonormality at K=60", ok);
  }
  {
    const double closed = cf::classical_partition(10, 1.0, 3);
    const double brute = cf::brute_force_partition(10, 1.0, 3);
    add("partition closed form vs integral", std::abs(closed / brute - 1.0) < 1e-5);
  }
  {
    const auto dist = cf::exact_pnex(500, 20.0);
    double sum = 0.0;
    for (double p : dist.probabilities) sum += p;
    add("exact distribution normalization", std::abs(sum - 1.0) < 1e-12);
  }
  {
    const auto dist = cf::classical_pnex(500, 20.0, 20);
    double z = 0.0;
    for (std::size_t i = 1; i < dist.grid.size(); ++i) {
      z += 0.5 * (dist.density[i] + dist.density[i - 1]) *
           (dist.grid[i] - dist.grid[i - 1]);
    }
    add("classical distribution normalization", std::abs(z - 1.0) < 1e-10);
  }
  {
    cf::ModelParams params;
    params.atom_number = 500.0;
    params.coupling = 0.0;
    params.temperature = 0.0;
    params.cutoff = 0;
    const cf::Grid grid = cf::build_grid(60);
    const cf::GroundState gs = cf::imaginary_time_ground_state(params, grid);
    add("ideal ground state mu = 1/2", std::abs(gs.mu - 0.5) < 1e-6);
  }
  {
    cf::ResultTable t;
    t.add_meta("k", "v");
    t.add_column("a", "hw");
    t.add_column("b");
    t.add_row({1.0, -0.125});
    t.add_row({3.5e-5, 7.0});
    add("table round trip", cf::ResultTable::parse(t.emit()) == t);
  }
  {
    cf::ModelParams params;
    params.atom_number = 500.0;
    params.coupling = 0.0;
    params.temperature = 5.0;
    params.cutoff = 5;
    const cf::Grid grid = cf::build_grid(5);
    const cf::BasisTable basis = cf::build_basis(5, grid);
    const auto a = cf::run_chain(params, basis, {}, 400, 100, 5, 99);
    const auto b = cf::run_chain(params, basis, {}, 400, 100, 5, 99);
    bool identical = a.snapshots.size() == b.snapshots.size();
    for (std::size_t s = 0; identical && s < a.snapshots.size(); ++s) {
      identical = a.snapshots[s].amplitudes == b.snapshots[s].amplitudes;
    }
    add("chain determinism", identical);
  }
  if (!fast) {
    cf::ModelParams params;
    params.atom_number = 500.0;
    params.coupling = 0.0;
    params.temperature = 10.0;
    params.cutoff = 1;
    const cf::Grid grid = cf::build_grid(1);
    const cf::BasisTable basis = cf::build_basis(1, grid);
    const auto stream = cf::run_chain(params, basis, {}, 60000, 5000, 2, 2024);
    std::vector<double> n1;
    n1.reserve(stream.snapshots.size());
    for (const auto& s : stream.snapshots) n1.push_back(std::norm(s.amplitudes[1]));
    // stationary law of n1 at K=1, g=0: density ~ exp(-n1/T) on [0, N]
    const double t_temp = params.temperature;
    const double n_atoms = params.atom_number;
    const int bins = 50;
    std::vector<double> expected(bins);
    const double width = n_atoms / bins;
    const double norm = 1.0 - std::exp(-n_atoms / t_temp);
    for (int b = 0; b < bins; ++b) {
      const double lo = b * width, hi = lo + width;
      expected[static_cast<std::size_t>(b)] =
          (std::exp(-lo / t_temp) - std::exp(-hi / t_temp)) / norm;
    }
    std::vector<double> observed(bins, 0.0);
    for (double v : n1) {
      auto b = static_cast<int>(v / width);
      if (b >= bins) b = bins - 1;
      observed[static_cast<std::size_t>(b)] += 1.0;
    }
    double chi2 = 0.0;
    int dof = 0;
    const auto total = static_cast<double>(n1.size());
    for (int b = 0; b < bins; ++b) {
      const double e = expected[static_cast<std::size_t>(b)] * total;
      if (e < 5.0) continue;
      const double d = observed[static_cast<std::size_t>(b)] - e;
      chi2 += d * d / e;
      ++dof;
    }
    const double p = cf::chi_squared_p_value(chi2, dof - 1);
    add("single-mode stationary distribution (chi2 p > 0.01)", p > 0.01);
  }

  for (const auto& c : checks) {
    if (!c.ok) return 2;
  }
  std::cout << "all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"canonical-ensemble classical-field sampler for a trapped 1D Bose gas"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path;

  auto* run = app.add_subcommand("run", "single-temperature sampling run");
  run->add_option("--config", config_path, "run configuration file")->required();
  run->add_option("--out", ov.out_dir, "output directory override");
  auto* run_seed = run->add_option("--seed", ov.seed, "base seed override");
  run->add_option("--chains", ov.chains, "chain count override");

  auto* sweep = app.add_subcommand("sweep", "temperature sweep");
  sweep->add_option("--config", config_path, "run configuration file")->required();
  sweep->add_option("--temps", ov.temps, "comma-separated temperature list");
  sweep->add_option("--out", ov.out_dir, "output directory override");
  auto* sweep_seed = sweep->add_option("--seed", ov.seed, "base seed override");
  sweep->add_option("--chains", ov.chains, "chain count override");

  int ir_atoms = 0, ir_cutoff = 0;
  double ir_temp = 0.0;
  std::string ir_out = ".";
  auto* ideal = app.add_subcommand("ideal-ref", "exact and classical ideal-gas references");
  ideal->add_option("--atoms", ir_atoms, "atom number")->required();
  ideal->add_option("--temp", ir_temp, "temperature")->required();
  ideal->add_option("--cutoff", ir_cutoff, "mode cutoff K")->required();
  ideal->add_option("--out", ir_out, "output directory");

  double gp_atoms = 0.0, gp_coupling = 0.0, gp_temp = -1.0;
  auto* gpe = app.add_subcommand("gpe", "imaginary-time mean-field ground state");
  gpe->add_option("--atoms", gp_atoms, "atom number")->required();
  gpe->add_option("--coupling", gp_coupling, "interaction strength g")->required();
  gpe->add_option("--temp", gp_temp, "also report the cutoff at this temperature");

  bool fast = false;
  auto* check = app.add_subcommand("check", "run the invariant and oracle suites");
  check->add_flag("--fast", fast, "skip the slower sampler checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ov.has_seed = run_seed->count() > 0;
      return cmd_run(config_path, ov);
    }
    if (sweep->parsed()) {
      ov.has_seed = sweep_seed->count() > 0;
      return cmd_sweep(config_path, ov);
    }
    if (ideal->parsed()) return cmd_ideal_ref(ir_atoms, ir_temp, ir_cutoff, ir_out);
    if (gpe->parsed()) return cmd_gpe(gp_atoms, gp_coupling, gp_temp);
    if (check->parsed()) return cmd_check(fast);
  } catch (const cf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const cf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const cf::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
