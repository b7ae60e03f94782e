#pragma once

#include <complex>
#include <span>
#include <vector>

namespace cf {

struct EigenResult {
  int dim = 0;
  std::vector<double> values;                 // descending
  std::vector<std::complex<double>> vectors;  // column n at [dim*n, dim*(n+1))

  std::span<const std::complex<double>> vector(int n) const {
    return {vectors.data() + static_cast<std::size_t>(dim) * n,
            static_cast<std::size_t>(dim)};
  }
};

// Full eigendecomposition of a dense Hermitian matrix (row-major, dim x dim)
// by cyclic Jacobi rotations.  Eigenvalues sorted descending; each
// eigenvector's global phase is fixed by making its largest-magnitude
// component real positive.  Rejects non-Hermitian input.
EigenResult hermitian_eigendecomposition(std::vector<std::complex<double>> matrix, int dim);

}  // namespace cf
