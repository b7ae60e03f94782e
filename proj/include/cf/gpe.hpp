#pragma once

#include <span>
#include <vector>

#include "cf/basis.hpp"
#include "cf/field.hpp"

namespace cf {

// Zero-temperature mean-field ground state from imaginary-time relaxation of
//   d_tau psi = -(-1/2 d^2/dx^2 + x^2/2 + g |psi|^2) psi
// with renormalization to N after every step.  The kinetic-plus-trap half
// steps act diagonally in the oscillator basis (spectral split step); the
// mode count is taken from grid.built_for.
struct GroundState {
  std::vector<double> psi;  // real, nonnegative, quadrature-normalized to N
  double mu = 0.0;          // chemical potential, from the converged mode amplitudes
  double energy = 0.0;      // total mean-field energy
  double residual = 0.0;    // max-norm change in psi over the final step
  long iterations = 0;
};

GroundState imaginary_time_ground_state(const ModelParams& params, const Grid& grid,
                                        double dtau = 0.002, double tol = 1e-9,
                                        long max_iterations = 200000);

// mu = quadrature(psi (-1/2 d^2/dx^2 + x^2/2 + g psi^2) psi) / N with a
// finite-difference Laplacian; independent of the spectral route used by the
// solver, agreement within 1e-3 relative is asserted in the tests.
double chemical_potential(std::span<const double> psi, const Grid& grid,
                          const ModelParams& params);

// Thomas-Fermi estimate (3 g N / (4 sqrt(2)))^(2/3), valid for gN >> 1.
double thomas_fermi_mu(double atom_number, double coupling);

// Mode cutoff K = ceil(mu + T); the ideal-gas rule K = T is the mu = 0 case.
struct CutoffResult {
  int cutoff = 0;
  bool flagged = false;  // K = 0: no dynamics possible
};

CutoffResult cutoff_for(double temperature, double mu);

}  // namespace cf
