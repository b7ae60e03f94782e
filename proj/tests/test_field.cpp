#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "cf/basis.hpp"
#include "cf/errors.hpp"
#include "cf/field.hpp"
#include "cf/gpe.hpp"
#include "cf/rng.hpp"

using cf::FieldConfiguration;
using cf::ModelParams;
using cplx = std::complex<double>;

namespace {

FieldConfiguration single_mode(int cutoff, int mode, double occupation) {
  FieldConfiguration c;
  c.amplitudes.assign(static_cast<std::size_t>(cutoff) + 1, cplx{0.0, 0.0});
  c.amplitudes[static_cast<std::size_t>(mode)] = std::sqrt(occupation);
  return c;
}

}  // namespace

TEST_CASE("ModelParams validation") {
  ModelParams p{500.0, 1.0, 20.0, 62};
  CHECK_NOTHROW(p.validate());
  p.atom_number = 0.0;
  CHECK_THROWS_AS(p.validate(), cf::ConfigError);
  p = {500.0, -0.1, 20.0, 62};
  CHECK_THROWS_AS(p.validate(), cf::ConfigError);
  p = {500.0, 1.0, -1.0, 62};
  CHECK_THROWS_AS(p.validate(), cf::ConfigError);
  p = {500.0, 1.0, 20.0, -1};
  CHECK_THROWS_AS(p.validate(), cf::ConfigError);
}

TEST_CASE("oscillator energy weighted sums") {
  CHECK(cf::oscillator_energy(single_mode(5, 0, 500.0)) == 0.0);
  CHECK(cf::oscillator_energy(single_mode(5, 1, 500.0)) == doctest::Approx(500.0));

  FieldConfiguration c;
  c.amplitudes.assign(6, cplx{0.0, 0.0});
  c.amplitudes[0] = std::sqrt(250.0);
  c.amplitudes[2] = cplx{0.0, std::sqrt(250.0)};
  CHECK(cf::oscillator_energy(c) == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("interaction energy of the condensate mode") {
  const cf::Grid g = cf::build_grid(10);
  const cf::BasisTable b = cf::build_basis(10, g);
  const FieldConfiguration c = single_mode(10, 0, 500.0);

  CHECK(cf::interaction_energy(c, b, 0.0) == 0.0);
  // (g/2) N^2 / sqrt(2 pi)
  CHECK(cf::interaction_energy(c, b, 0.02) == doctest::Approx(997.3557010035818).epsilon(1e-5));

  // degree-4 homogeneity: doubling N quadruples the value
  const double e1 = cf::interaction_energy(single_mode(10, 0, 250.0), b, 1.0);
  const double e2 = cf::interaction_energy(single_mode(10, 0, 500.0), b, 1.0);
  CHECK(e2 == doctest::Approx(4.0 * e1).epsilon(1e-12));
}

TEST_CASE("total energy reduces and is phase invariant") {
  const cf::Grid g = cf::build_grid(12);
  const cf::BasisTable b = cf::build_basis(12, g);
  ModelParams params{500.0, 0.0, 20.0, 12};

  cf::Rng rng(3);
  FieldConfiguration c;
  c.amplitudes.resize(13);
  double norm = 0.0;
  for (auto& v : c.amplitudes) {
    v = {rng.normal(), rng.normal()};
    norm += std::norm(v);
  }
  for (auto& v : c.amplitudes) v *= std::sqrt(500.0 / norm);

  const auto g0 = cf::total_energy(c, b, params);
  CHECK(g0.interaction == 0.0);
  CHECK(g0.total == doctest::Approx(cf::oscillator_energy(c)).epsilon(1e-14));

  params.coupling = 1.0;
  const auto before = cf::total_energy(c, b, params);
  CHECK(before.total == doctest::Approx(before.kinetic_potential + before.interaction));
  CHECK(before.interaction >= 0.0);

  const cplx phase = std::polar(1.0, 1.2345);
  FieldConfiguration rotated = c;
  for (auto& v : rotated.amplitudes) v *= phase;
  const auto after = cf::total_energy(rotated, b, params);
  CHECK(after.total == doctest::Approx(before.total).epsilon(1e-12));

  // parity map alpha_n -> (-1)^n alpha_n leaves the interaction unchanged
  FieldConfiguration flipped = c;
  for (std::size_t n = 1; n < flipped.amplitudes.size(); n += 2) flipped.amplitudes[n] *= -1.0;
  const auto par = cf::total_energy(flipped, b, params);
  CHECK(par.interaction == doctest::Approx(before.interaction).epsilon(1e-10));
}

TEST_CASE("total energy of the mean-field ground state matches the solver") {
  ModelParams params{500.0, 1.0, 0.0, 0};
  const cf::Grid grid = cf::build_grid(140);
  const cf::GroundState gs = cf::imaginary_time_ground_state(params, grid);

  // project the solver profile onto the oscillator basis and re-evaluate
  const int k = 140;
  const cf::BasisTable b = cf::build_basis(k, grid);
  FieldConfiguration c;
  c.amplitudes.resize(static_cast<std::size_t>(k) + 1);
  for (int n = 0; n <= k; ++n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) acc += b.at(n, i) * gs.psi[i];
    c.amplitudes[static_cast<std::size_t>(n)] = acc * grid.spacing;
  }
  params.cutoff = k;
  const auto e = cf::total_energy(c, b, params);
  // the field energy omits the constant zero-point N/2
  CHECK(e.total + 0.5 * params.atom_number ==
        doctest::Approx(gs.energy).epsilon(1e-6));
}

TEST_CASE("boltzmann log weight") {
  CHECK(cf::boltzmann_log_weight(0.0, 5.0) == 0.0);
  CHECK(cf::boltzmann_log_weight(20.0, 20.0) == doctest::Approx(-1.0));
  const double r = cf::boltzmann_log_weight(17.0, 3.0) - cf::boltzmann_log_weight(11.0, 3.0);
  CHECK(std::exp(r) == doctest::Approx(std::exp(-6.0 / 3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(cf::boltzmann_log_weight(1.0, 0.0), cf::ConfigError);
}

TEST_CASE("norm accessor") {
  const FieldConfiguration c = single_mode(4, 2, 123.0);
  CHECK(c.cutoff() == 4);
  CHECK(c.norm_squared() == doctest::Approx(123.0).epsilon(1e-14));
}
