#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "cf/analysis.hpp"
#include "cf/blocking.hpp"
#include "cf/errors.hpp"
#include "cf/hermitian_eig.hpp"
#include "cf/rng.hpp"
#include "cf/sampler.hpp"
#include "cf/stats.hpp"

using cplx = std::complex<double>;

namespace {

cf::SampleStream stream_of(std::vector<std::vector<cplx>> snapshots) {
  cf::SampleStream s;
  for (auto& amps : snapshots) {
    cf::Snapshot snap;
    snap.amplitudes = std::move(amps);
    s.snapshots.push_back(std::move(snap));
  }
  return s;
}

}  // namespace

TEST_CASE("density matrix accumulation and merge") {
  const double n_atoms = 500.0;
  auto s = stream_of({{cplx{std::sqrt(n_atoms), 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}}});
  const auto rho = cf::accumulate_density_matrix(s);
  CHECK(rho.mean(0, 0).real() == doctest::Approx(n_atoms));
  CHECK(std::abs(rho.mean(0, 1)) == 0.0);
  CHECK(rho.mean_trace() == doctest::Approx(n_atoms).epsilon(1e-12));

  cf::Rng rng(8);
  std::vector<std::vector<cplx>> a_snaps, b_snaps, all;
  for (int k = 0; k < 40; ++k) {
    std::vector<cplx> amps(3);
    double norm = 0.0;
    for (auto& v : amps) {
      v = {rng.normal(), rng.normal()};
      norm += std::norm(v);
    }
    for (auto& v : amps) v *= std::sqrt(n_atoms / norm);
    (k < 17 ? a_snaps : b_snaps).push_back(amps);
    all.push_back(amps);
  }
  auto sa = stream_of(a_snaps);
  auto sb = stream_of(b_snaps);
  auto rho_a = cf::accumulate_density_matrix(sa);
  const auto rho_b = cf::accumulate_density_matrix(sb);
  rho_a.merge(rho_b);
  auto s_all = stream_of(all);
  const auto rho_all = cf::accumulate_density_matrix(s_all);
  CHECK(rho_a.count == rho_all.count);
  for (std::size_t e = 0; e < rho_all.sums.size(); ++e) {
    CHECK(std::abs(rho_a.sums[e] - rho_all.sums[e]) < 1e-12 * n_atoms * rho_all.count);
  }
  CHECK(rho_all.mean_trace() == doctest::Approx(n_atoms).epsilon(1e-9));
}

TEST_CASE("diagonal density matrix decomposes trivially") {
  cf::DensityMatrix rho;
  rho.dim = 4;
  rho.count = 1;
  rho.sums.assign(16, cplx{0.0, 0.0});
  rho.sums[0] = 450.0;
  rho.sums[5] = 30.0;
  rho.sums[10] = 20.0;
  const auto dec = cf::diagonalize(rho);
  CHECK(dec.occupations[0] == doctest::Approx(450.0).epsilon(1e-12));
  CHECK(dec.occupations[1] == doctest::Approx(30.0).epsilon(1e-12));
  CHECK(dec.occupations[2] == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(std::abs(dec.condensate_vector()[0] - 1.0) < 1e-12);
}

TEST_CASE("random Hermitian matrices reconstruct from their spectra") {
  cf::Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const int dim = 5;
    std::vector<cplx> m(25);
    for (int i = 0; i < dim; ++i) {
      m[static_cast<std::size_t>(i * dim + i)] = rng.normal();
      for (int j = i + 1; j < dim; ++j) {
        const cplx v{rng.normal(), rng.normal()};
        m[static_cast<std::size_t>(i * dim + j)] = v;
        m[static_cast<std::size_t>(j * dim + i)] = std::conj(v);
      }
    }
    const auto eig = cf::hermitian_eigendecomposition(m, dim);
    for (int n = 1; n < dim; ++n) CHECK(eig.values[n - 1] >= eig.values[n]);
    // orthonormal vectors
    for (int p = 0; p < dim; ++p) {
      for (int q = p; q < dim; ++q) {
        cplx dot{0.0, 0.0};
        for (int i = 0; i < dim; ++i) {
          dot += std::conj(eig.vector(p)[static_cast<std::size_t>(i)]) *
                 eig.vector(q)[static_cast<std::size_t>(i)];
        }
        CHECK(std::abs(dot - (p == q ? 1.0 : 0.0)) < 1e-10);
      }
    }
    // sum_n lambda_n v v^H = M elementwise
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        cplx acc{0.0, 0.0};
        for (int n = 0; n < dim; ++n) {
          acc += eig.values[n] * eig.vector(n)[static_cast<std::size_t>(i)] *
                 std::conj(eig.vector(n)[static_cast<std::size_t>(j)]);
        }
        CHECK(std::abs(acc - m[static_cast<std::size_t>(i * dim + j)]) < 1e-9);
      }
    }
  }
  std::vector<cplx> bad(4, cplx{1.0, 1.0});
  CHECK_THROWS_AS(cf::hermitian_eigendecomposition(bad, 2), cf::ConfigError);
}

TEST_CASE("occupation series projections") {
  const double n_atoms = 500.0;
  std::vector<cplx> beta{cplx{0.6, 0.0}, cplx{0.0, 0.8}};
  std::vector<cplx> aligned{std::sqrt(n_atoms) * beta[0], std::sqrt(n_atoms) * beta[1]};
  std::vector<cplx> orthogonal{cplx{0.8, 0.0}, cplx{0.0, -0.6}};
  for (auto& v : orthogonal) v *= std::sqrt(n_atoms);
  auto s = stream_of({aligned, orthogonal});
  const auto series = cf::occupation_series(s, beta);
  CHECK(series[0] == doctest::Approx(n_atoms).epsilon(1e-12));
  CHECK(series[1] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("occupation statistics") {
  std::vector<double> constant(200, 480.0);
  const auto stats = cf::occupation_statistics(constant, 500.0);
  CHECK(stats.mean == doctest::Approx(480.0));
  CHECK(stats.variance == doctest::Approx(0.0));

  std::vector<double> tiny(20, 1.0);
  CHECK_THROWS_AS(cf::occupation_statistics(tiny, 500.0), cf::ConfigError);

  cf::Rng rng(12);
  std::vector<double> series;
  for (int i = 0; i < 4000; ++i) series.push_back(400.0 + 25.0 * rng.normal());
  const auto gstats = cf::occupation_statistics(series, 500.0);
  CHECK(gstats.mean == doctest::Approx(400.0).epsilon(0.01));
  CHECK(gstats.variance == doctest::Approx(625.0).epsilon(0.15));
  // histogram of N_ex integrates to 1
  double z = 0.0;
  for (std::size_t b = 0; b + 1 < gstats.excited_histogram.edges.size(); ++b) {
    z += gstats.excited_histogram.density[b] *
         (gstats.excited_histogram.edges[b + 1] - gstats.excited_histogram.edges[b]);
  }
  CHECK(z == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("crossover temperature from a parabola and edge flagging") {
  std::vector<double> temps{10.0, 20.0, 30.0, 40.0, 50.0};
  std::vector<double> vars, errs;
  for (double t : temps) {
    vars.push_back(100.0 - 0.25 * (t - 34.0) * (t - 34.0));
    errs.push_back(1.0);
  }
  const auto est = cf::crossover_temperature(temps, vars, errs);
  CHECK_FALSE(est.at_edge);
  CHECK(est.t_star == doctest::Approx(34.0).epsilon(1e-9));
  CHECK(est.t_star_error > 0.0);

  std::vector<double> rising{1.0, 2.0, 3.0, 4.0, 5.0};
  const auto edge = cf::crossover_temperature(temps, rising, errs);
  CHECK(edge.at_edge);
  CHECK(edge.t_star == doctest::Approx(50.0));
}

TEST_CASE("g1 of a pure condensate is identically one") {
  const cf::Grid grid = cf::build_grid(6);
  const cf::BasisTable basis = cf::build_basis(6, grid);
  std::vector<cplx> coherent(7, cplx{0.0, 0.0});
  coherent[0] = std::sqrt(500.0);
  auto s = stream_of({coherent, coherent, coherent});
  const auto prof = cf::g1_profile(s, basis);
  CHECK(prof.g1.front() == 1.0);  // exact at x = 0
  for (double v : prof.g1) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(prof.condensate_density.front() == doctest::Approx(1.0));
  CHECK(prof.condensate_occupation == doctest::Approx(500.0).epsilon(1e-9));
  for (std::size_t i = 1; i < prof.x.size(); ++i) CHECK(prof.x[i] > prof.x[i - 1]);

  const auto sym = cf::g1_profile(s, basis, true);
  for (std::size_t i = 0; i < prof.g1.size(); ++i) {
    CHECK(sym.g1[i] == doctest::Approx(prof.g1[i]).epsilon(1e-9));
  }
}

TEST_CASE("fwhm of reference shapes") {
  std::vector<double> x, y;
  for (int i = -400; i <= 400; ++i) {
    x.push_back(i * 0.01);
    y.push_back(std::exp(-x.back() * x.back()));
  }
  CHECK(cf::fwhm(x, y) == doctest::Approx(2.0 * std::sqrt(std::log(2.0))).epsilon(0.01));

  std::vector<double> tx{-2.0, -1.0, 0.0, 1.0, 2.0};
  std::vector<double> ty{0.0, 0.0, 1.0, 0.0, 0.0};
  CHECK(cf::fwhm(tx, ty) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> monotone{0.0, 1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS(cf::fwhm(tx, monotone));
}

TEST_CASE("local density fluctuations: constant and Gaussian fields") {
  const cf::Grid grid = cf::build_grid(4);
  const cf::BasisTable basis = cf::build_basis(4, grid);

  std::vector<cplx> fixed(5);
  cf::Rng rng(5);
  for (auto& v : fixed) v = {rng.normal(), rng.normal()};
  std::vector<std::vector<cplx>> same(300, fixed);
  auto s_const = stream_of(std::move(same));
  const auto flat = cf::local_density_fluctuations(s_const, basis, 0.0);
  CHECK(flat.normalized_variance == doctest::Approx(0.0).epsilon(1e-12));

  // i.i.d. complex Gaussian amplitudes give a Gaussian field at any point:
  // <n^2> = 2 <n>^2, so the normalized variance is 1
  std::vector<std::vector<cplx>> gauss;
  for (int k = 0; k < 20000; ++k) {
    std::vector<cplx> amps(5);
    for (auto& v : amps) v = {rng.normal(), rng.normal()};
    gauss.push_back(std::move(amps));
  }
  auto s_gauss = stream_of(std::move(gauss));
  const auto fl = cf::local_density_fluctuations(s_gauss, basis, 0.0);
  CHECK(fl.normalized_variance == doctest::Approx(1.0).epsilon(0.05));

  // brute-force recomputation agrees to 1e-12
  std::vector<double> n_vals;
  const std::size_t c = grid.center_index();
  for (const auto& snap : s_gauss.snapshots) {
    cplx psi{0.0, 0.0};
    for (int n = 0; n < 5; ++n) psi += snap.amplitudes[static_cast<std::size_t>(n)] * basis.at(n, c);
    n_vals.push_back(std::norm(psi));
  }
  double m1 = 0.0, m2 = 0.0;
  for (double v : n_vals) {
    m1 += v;
    m2 += v * v;
  }
  m1 /= static_cast<double>(n_vals.size());
  m2 /= static_cast<double>(n_vals.size());
  CHECK(fl.normalized_variance ==
        doctest::Approx((m2 - m1 * m1) / (m1 * m1)).epsilon(1e-12));
  CHECK(fl.benchmark_form == doctest::Approx((m2 - m1) / (m1 * m1)).epsilon(1e-12));
  CHECK(fl.mean_density == doctest::Approx(m1).epsilon(1e-12));

  CHECK_THROWS_AS(cf::local_density_fluctuations(s_const, basis, 1000.0), cf::ConfigError);
}

TEST_CASE("blocking reproduces the naive error for independent samples") {
  cf::Rng rng(33);
  std::vector<double> iid;
  for (int i = 0; i < 16384; ++i) iid.push_back(rng.normal());
  const double naive = 1.0 / std::sqrt(static_cast<double>(iid.size()));
  CHECK(cf::blocked_error(iid) == doctest::Approx(naive).epsilon(0.25));

  // strongly correlated series must report a larger error than naive
  std::vector<double> ar;
  double state = 0.0;
  for (int i = 0; i < 16384; ++i) {
    state = 0.95 * state + rng.normal();
    ar.push_back(state);
  }
  double var = 0.0, mean = 0.0;
  for (double v : ar) mean += v;
  mean /= static_cast<double>(ar.size());
  for (double v : ar) var += (v - mean) * (v - mean);
  var /= static_cast<double>(ar.size() - 1);
  const double naive_ar = std::sqrt(var / static_cast<double>(ar.size()));
  CHECK(cf::blocked_error(ar) > 2.0 * naive_ar);
}

TEST_CASE("chi-squared p-values") {
  CHECK(cf::chi_squared_p_value(0.0, 10) == doctest::Approx(1.0));
  // median of chi2 with k dof is about k - 2/3
  const double mid = cf::chi_squared_p_value(49.33, 50);
  CHECK(mid > 0.45);
  CHECK(mid < 0.55);
  CHECK(cf::chi_squared_p_value(200.0, 50) < 1e-10);
}
