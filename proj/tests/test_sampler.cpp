#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "cf/basis.hpp"
#include "cf/errors.hpp"
#include "cf/field.hpp"
#include "cf/rng.hpp"
#include "cf/sampler.hpp"
#include "cf/stats.hpp"

using cf::ModelParams;
using cplx = std::complex<double>;

TEST_CASE("init_configuration modes") {
  ModelParams params{500.0, 0.0, 10.0, 8};
  cf::Rng rng(1);
  const auto ground = cf::init_configuration(params, cf::InitMode::ground, rng);
  CHECK(std::norm(ground.amplitudes[0]) == doctest::Approx(500.0));
  for (std::size_t n = 1; n < ground.amplitudes.size(); ++n) {
    CHECK(std::abs(ground.amplitudes[n]) == 0.0);
  }

  cf::Rng r1(42), r2(42);
  const auto a = cf::init_configuration(params, cf::InitMode::thermal_random, r1);
  const auto b = cf::init_configuration(params, cf::InitMode::thermal_random, r2);
  CHECK(a.amplitudes == b.amplitudes);
  CHECK(a.norm_squared() == doctest::Approx(500.0).epsilon(1e-9));
}

TEST_CASE("two-mode rotation preserves the pair norm and reverses") {
  ModelParams params{500.0, 0.0, 10.0, 6};
  cf::Rng rng(9);
  auto config = cf::init_configuration(params, cf::InitMode::thermal_random, rng);
  const cf::MoveParams mp;

  for (int trial = 0; trial < 200; ++trial) {
    const auto cand = cf::propose_two_mode_rotation(config, mp, rng);
    CHECK(cand.mode_a != cand.mode_b);
    const auto ai = config.amplitudes[static_cast<std::size_t>(cand.mode_a)];
    const auto aj = config.amplitudes[static_cast<std::size_t>(cand.mode_b)];
    CHECK(std::norm(cand.new_a) + std::norm(cand.new_b) ==
          doctest::Approx(std::norm(ai) + std::norm(aj)).epsilon(1e-12));

    // inverse rotation (-theta, phi) restores the pair
    const double c = std::cos(cand.theta), s = std::sin(cand.theta);
    const cplx ph = std::polar(1.0, cand.phi);
    const cplx back_a = c * cand.new_a - ph * s * cand.new_b;
    const cplx back_b = std::conj(ph) * s * cand.new_a + c * cand.new_b;
    CHECK(std::abs(back_a - ai) < 1e-12 * (1.0 + std::abs(ai)));
    CHECK(std::abs(back_b - aj) < 1e-12 * (1.0 + std::abs(aj)));
  }
}

TEST_CASE("rotation requires at least two modes") {
  cf::FieldConfiguration single;
  single.amplitudes = {cplx{10.0, 0.0}};
  cf::Rng rng(4);
  CHECK_THROWS_AS(cf::propose_two_mode_rotation(single, cf::MoveParams{}, rng),
                  cf::ConfigError);
}

TEST_CASE("metropolis rule: downhill always, uphill at the Boltzmann rate") {
  cf::Rng rng(77);
  for (int i = 0; i < 100; ++i) {
    CHECK(cf::metropolis_accept(-std::abs(rng.normal()), 5.0, rng));
    CHECK(cf::metropolis_accept(0.0, 5.0, rng));
  }

  const int trials = 200000;
  int accepted = 0;
  for (int i = 0; i < trials; ++i) {
    if (cf::metropolis_accept(20.0, 20.0, rng)) ++accepted;
  }
  const double p = std::exp(-1.0);
  const double sigma = std::sqrt(p * (1.0 - p) * trials);
  CHECK(std::abs(accepted - p * trials) < 3.0 * sigma);

  CHECK_THROWS_AS(cf::metropolis_accept(1.0, 0.0, rng), cf::ConfigError);
  CHECK_THROWS_AS(cf::metropolis_accept(std::numeric_limits<double>::quiet_NaN(), 1.0, rng),
                  cf::NumericalError);
}

TEST_CASE("run_chain is deterministic and keeps the norm") {
  ModelParams params{500.0, 0.0, 10.0, 5};
  const cf::Grid grid = cf::build_grid(5);
  const cf::BasisTable basis = cf::build_basis(5, grid);
  const auto a = cf::run_chain(params, basis, {}, 2000, 500, 3, 314);
  const auto b = cf::run_chain(params, basis, {}, 2000, 500, 3, 314);
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  CHECK(a.snapshots.size() == 500);
  for (std::size_t s = 0; s < a.snapshots.size(); ++s) {
    CHECK(a.snapshots[s].amplitudes == b.snapshots[s].amplitudes);
    double norm = 0.0;
    for (const auto& amp : a.snapshots[s].amplitudes) norm += std::norm(amp);
    CHECK(std::abs(norm - 500.0) < 1e-6 * 500.0);
  }
  CHECK(a.meta.adapted_theta_scale == b.meta.adapted_theta_scale);
  CHECK_THROWS_AS(cf::run_chain(params, basis, {}, 100, 200, 1, 1), cf::ConfigError);
}

TEST_CASE("norm drift stays below 1e-6 N over 1e7 proposals") {
  ModelParams params{500.0, 0.0, 10.0, 4};
  const cf::Grid grid = cf::build_grid(4);
  const cf::BasisTable basis = cf::build_basis(4, grid);
  // 1 sweep = 5 proposals; 2e6 sweeps = 1e7 proposals
  const auto stream = cf::run_chain(params, basis, {}, 2000000, 0, 100000, 2718);
  double norm = 0.0;
  for (const auto& amp : stream.snapshots.back().amplitudes) norm += std::norm(amp);
  CHECK(std::abs(norm - 500.0) < 1e-6 * 500.0);
}

TEST_CASE("adapted chain has a reasonable acceptance rate") {
  ModelParams params{500.0, 0.0, 20.0, 20};
  const cf::Grid grid = cf::build_grid(20);
  const cf::BasisTable basis = cf::build_basis(20, grid);
  const auto stream = cf::run_chain(params, basis, {}, 6000, 3000, 10, 555);
  cf::MoveParams frozen;
  frozen.theta_scale = stream.meta.adapted_theta_scale;

  cf::Rng rng(555);
  auto init = cf::init_configuration(params, cf::InitMode::thermal_random, rng);
  cf::ChainState chain(params, basis, std::move(init), 999);
  for (int i = 0; i < 30000; ++i) chain.metropolis_step(frozen);
  CHECK(chain.acceptance_rate() > 0.2);
  CHECK(chain.acceptance_rate() < 0.8);
}

TEST_CASE("single-pair stationary law matches direct quadrature") {
  // K=1, g=0: the marginal density of n1 = |alpha_1|^2 on [0, N] is
  // proportional to exp(-n1/T)
  const double n_atoms = 100.0, t_temp = 8.0;
  ModelParams params{n_atoms, 0.0, t_temp, 1};
  const cf::Grid grid = cf::build_grid(1);
  const cf::BasisTable basis = cf::build_basis(1, grid);
  const auto stream = cf::run_chain(params, basis, {}, 120000, 10000, 2, 1234);

  std::vector<double> n1;
  n1.reserve(stream.snapshots.size());
  for (const auto& s : stream.snapshots) n1.push_back(std::norm(s.amplitudes[1]));

  const int bins = 50;
  const double width = n_atoms / bins;
  const double z = 1.0 - std::exp(-n_atoms / t_temp);
  double chi2 = 0.0;
  int used = 0;
  std::vector<double> counts(bins, 0.0);
  for (double v : n1) {
    auto b = static_cast<int>(v / width);
    if (b >= bins) b = bins - 1;
    counts[static_cast<std::size_t>(b)] += 1.0;
  }
  for (int b = 0; b < bins; ++b) {
    const double lo = b * width;
    const double prob = (std::exp(-lo / t_temp) - std::exp(-(lo + width) / t_temp)) / z;
    const double expected = prob * static_cast<double>(n1.size());
    if (expected < 5.0) continue;
    const double d = counts[static_cast<std::size_t>(b)] - expected;
    chi2 += d * d / expected;
    ++used;
  }
  const double p = cf::chi_squared_p_value(chi2, used - 1);
  CHECK(p > 0.01);

  // binned CDF distance against the analytic density
  std::vector<double> ref_x, ref_f;
  for (int i = 0; i <= 400; ++i) {
    const double x = n_atoms * i / 400.0;
    ref_x.push_back(x);
    ref_f.push_back(std::exp(-x / t_temp));
  }
  CHECK(cf::binned_cdf_distance(n1, ref_x, ref_f, 50) < 0.01);
}

TEST_CASE("interacting chain keeps its energy cache consistent") {
  ModelParams params{500.0, 1.0, 20.0, 30};
  const cf::Grid grid = cf::build_grid(30);
  const cf::BasisTable basis = cf::build_basis(30, grid);
  const auto stream = cf::run_chain(params, basis, {}, 1500, 500, 10, 606);
  const auto& last = stream.snapshots.back();
  cf::FieldConfiguration c;
  c.amplitudes = last.amplitudes;
  const auto fresh = cf::total_energy(c, basis, params);
  CHECK(fresh.total == doctest::Approx(last.energy.total).epsilon(1e-7));
}

TEST_CASE("merge_streams concatenates snapshots") {
  ModelParams params{500.0, 0.0, 10.0, 3};
  const cf::Grid grid = cf::build_grid(3);
  const cf::BasisTable basis = cf::build_basis(3, grid);
  auto a = cf::run_chain(params, basis, {}, 600, 100, 5, 1);
  auto b = cf::run_chain(params, basis, {}, 600, 100, 5, 2);
  const auto na = a.snapshots.size(), nb = b.snapshots.size();
  const auto first_b = b.snapshots.front().amplitudes;
  std::vector<cf::SampleStream> both;
  both.push_back(std::move(a));
  both.push_back(std::move(b));
  const auto merged = cf::merge_streams(std::move(both));
  CHECK(merged.snapshots.size() == na + nb);
  CHECK(merged.snapshots[na].amplitudes == first_b);
}

TEST_CASE("minimize_energy finds the ideal ground state") {
  ModelParams params{500.0, 0.0, 0.0, 10};
  const cf::Grid grid = cf::build_grid(10);
  const cf::BasisTable basis = cf::build_basis(10, grid);
  const auto ground = cf::minimize_energy(params, basis, {}, 2000, 31);
  CHECK(cf::oscillator_energy(ground) < 1e-6 * 500.0);
  for (std::size_t n = 1; n < ground.amplitudes.size(); ++n) {
    CHECK(std::norm(ground.amplitudes[n]) / 500.0 < 1e-6);
  }
}
