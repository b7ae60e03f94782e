#include "cf/gpe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "cf/errors.hpp"

namespace cf {

namespace {

// c_n = sum_i phi_n(x_i) psi_i dx
void to_modes(const BasisTable& basis, const std::vector<double>& psi,
              std::vector<double>& coeff) {
  const auto modes = static_cast<std::size_t>(basis.max_mode) + 1;
  const std::size_t m = basis.grid.size();
  coeff.assign(modes, 0.0);
  for (std::size_t n = 0; n < modes; ++n) {
    const double* row = basis.values.data() + n * m;
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) acc += row[i] * psi[i];
    coeff[n] = acc * basis.grid.spacing;
  }
}

void to_grid(const BasisTable& basis, const std::vector<double>& coeff,
             std::vector<double>& psi) {
  const auto modes = static_cast<std::size_t>(basis.max_mode) + 1;
  const std::size_t m = basis.grid.size();
  psi.assign(m, 0.0);
  for (std::size_t n = 0; n < modes; ++n) {
    const double* row = basis.values.data() + n * m;
    const double c = coeff[n];
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) psi[i] += c * row[i];
  }
}

double quartic_integral(const std::vector<double>& psi, double dx) {
  double acc = 0.0;
  for (double v : psi) acc += v * v * v * v;
  return acc * dx;
}

double mean_field_energy(const std::vector<double>& coeff, const std::vector<double>& psi,
                         double coupling, double dx) {
  double osc = 0.0;
  for (std::size_t n = 0; n < coeff.size(); ++n) {
    osc += (static_cast<double>(n) + 0.5) * coeff[n] * coeff[n];
  }
  return osc + 0.5 * coupling * quartic_integral(psi, dx);
}

}  // namespace

GroundState imaginary_time_ground_state(const ModelParams& params, const Grid& grid,
                                        double dtau, double tol, long max_iterations) {
  if (!(dtau > 0.0)) throw ConfigError("imaginary_time_ground_state: dtau must be > 0");
  if (!(tol > 0.0)) throw ConfigError("imaginary_time_ground_state: tol must be > 0");
  if (!(params.atom_number > 0.0))
    throw ConfigError("imaginary_time_ground_state: N must be > 0");
  if (params.coupling < 0.0)
    throw ConfigError("imaginary_time_ground_state: g must be >= 0");

  const BasisTable basis = build_basis(grid.built_for, grid);
  const std::size_t m = grid.size();
  const double dx = grid.spacing;
  const double n_target = params.atom_number;
  const double g = params.coupling;

  // half-step oscillator decay factors exp(-dtau (n + 1/2) / 2)
  std::vector<double> half_decay(static_cast<std::size_t>(basis.max_mode) + 1);
  for (std::size_t n = 0; n < half_decay.size(); ++n) {
    half_decay[n] = std::exp(-0.5 * dtau * (static_cast<double>(n) + 0.5));
  }

  std::vector<double> psi(m), prev(m), coeff;
  const double amp = std::sqrt(n_target);
  for (std::size_t i = 0; i < m; ++i) psi[i] = amp * basis.at(0, i);

  to_modes(basis, psi, coeff);
  double energy = mean_field_energy(coeff, psi, g, dx);
  const double energy_slack = 1e-9 * (std::abs(energy) + 1.0);

  GroundState state;
  std::vector<double> residual_tail;
  for (long it = 1; it <= max_iterations; ++it) {
    prev = psi;

    to_modes(basis, psi, coeff);
    for (std::size_t n = 0; n < coeff.size(); ++n) coeff[n] *= half_decay[n];
    to_grid(basis, coeff, psi);
    for (std::size_t i = 0; i < m; ++i) psi[i] *= std::exp(-dtau * g * psi[i] * psi[i]);
    to_modes(basis, psi, coeff);
    for (std::size_t n = 0; n < coeff.size(); ++n) coeff[n] *= half_decay[n];
    to_grid(basis, coeff, psi);

    double norm = 0.0;
    for (double v : psi) norm += v * v;
    norm *= dx;
    if (!(norm > 0.0))
      throw NumericalError("imaginary_time_ground_state: profile collapsed to zero");
    const double scale = std::sqrt(n_target / norm);
    for (auto& v : psi) v *= scale;

    to_modes(basis, psi, coeff);
    const double new_energy = mean_field_energy(coeff, psi, g, dx);
    if (new_energy > energy + energy_slack) {
      throw NumericalError(
          "imaginary_time_ground_state: energy increased during relaxation; "
          "reduce dtau");
    }
    energy = new_energy;

    double change = 0.0;
    for (std::size_t i = 0; i < m; ++i) change = std::max(change, std::abs(psi[i] - prev[i]));
    state.residual = change;
    state.iterations = it;
    residual_tail.push_back(change);
    if (residual_tail.size() > 5) residual_tail.erase(residual_tail.begin());
    if (change < tol) break;
  }

  if (state.residual >= tol) {
    std::ostringstream msg;
    msg << "imaginary_time_ground_state: no convergence in " << max_iterations
        << " iterations; last residuals:";
    for (double r : residual_tail) msg << ' ' << r;
    throw NumericalError(msg.str());
  }

  for (auto& v : psi) v = std::abs(v);  // ground state has no nodes
  state.psi = psi;
  to_modes(basis, state.psi, coeff);
  double osc = 0.0;
  for (std::size_t n = 0; n < coeff.size(); ++n) {
    osc += (static_cast<double>(n) + 0.5) * coeff[n] * coeff[n];
  }
  const double quartic = quartic_integral(state.psi, dx);
  state.mu = (osc + g * quartic) / n_target;
  state.energy = osc + 0.5 * g * quartic;
  return state;
}

double chemical_potential(std::span<const double> psi, const Grid& grid,
                          const ModelParams& params) {
  const std::size_t m = grid.size();
  if (psi.size() != m) throw ConfigError("chemical_potential: profile does not fit the grid");
  const double dx = grid.spacing;
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double left = i > 0 ? psi[i - 1] : 0.0;
    const double right = i + 1 < m ? psi[i + 1] : 0.0;
    const double lap = (left - 2.0 * psi[i] + right) / (dx * dx);
    const double x = grid.points[i];
    acc += psi[i] * (-0.5 * lap + 0.5 * x * x * psi[i] +
                     params.coupling * psi[i] * psi[i] * psi[i]);
  }
  return acc * dx / params.atom_number;
}

double thomas_fermi_mu(double atom_number, double coupling) {
  if (!(coupling > 0.0)) throw ConfigError("thomas_fermi_mu: g must be > 0");
  return std::pow(3.0 * coupling * atom_number / (4.0 * std::sqrt(2.0)), 2.0 / 3.0);
}

CutoffResult cutoff_for(double temperature, double mu) {
  if (temperature < 0.0) throw ConfigError("cutoff_for: T must be >= 0");
  if (mu < 0.0) throw ConfigError("cutoff_for: mu must be >= 0");
  CutoffResult res;
  res.cutoff = static_cast<int>(std::ceil(mu + temperature));
  res.flagged = res.cutoff == 0;
  return res;
}

}  // namespace cf
