#include "cf/hermitian_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cf/errors.hpp"

namespace cf {

namespace {
using cplx = std::complex<double>;
}

EigenResult hermitian_eigendecomposition(std::vector<cplx> a, int dim) {
  const auto n = static_cast<std::size_t>(dim);
  if (dim < 1 || a.size() != n * n)
    throw ConfigError("hermitian_eigendecomposition: bad dimensions");

  double fro = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) fro += std::norm(a[p * n + q]);
  }
  fro = std::sqrt(fro);
  const double herm_tol = 1e-10 * (fro + 1.0);
  for (std::size_t p = 0; p < n; ++p) {
    if (std::abs(a[p * n + p].imag()) > herm_tol)
      throw ConfigError("hermitian_eigendecomposition: non-real diagonal");
    for (std::size_t q = p + 1; q < n; ++q) {
      if (std::abs(a[p * n + q] - std::conj(a[q * n + p])) > herm_tol)
        throw ConfigError("hermitian_eigendecomposition: input is not Hermitian");
    }
  }

  std::vector<cplx> v(n * n, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double stop = 1e-15 * (fro + 1.0);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a[p * n + q]);
    }
    if (std::sqrt(off) < stop) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a[p * n + q];
        const double r = std::abs(apq);
        if (r < stop / static_cast<double>(n)) continue;
        const cplx f = apq / r;  // phase of the pivot
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t =
            1.0 / (tau + std::copysign(std::sqrt(1.0 + tau * tau), tau == 0.0 ? 1.0 : tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // A <- J^H A J with J[p][p]=c, J[p][q]=s f, J[q][p]=-s conj(f), J[q][q]=c
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a[k * n + p];
          const cplx akq = a[k * n + q];
          a[k * n + p] = c * akp - s * std::conj(f) * akq;
          a[k * n + q] = s * f * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a[p * n + k];
          const cplx aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * f * aqk;
          a[q * n + k] = s * std::conj(f) * apk + c * aqk;
        }
        // restore exact Hermitian structure on the pivot entries
        a[p * n + p] = a[p * n + p].real();
        a[q * n + q] = a[q * n + q].real();
        a[p * n + q] = std::conj(a[q * n + p]);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v[k * n + p];
          const cplx vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * std::conj(f) * vkq;
          v[k * n + q] = s * f * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    return a[static_cast<std::size_t>(x) * n + static_cast<std::size_t>(x)].real() >
           a[static_cast<std::size_t>(y) * n + static_cast<std::size_t>(y)].real();
  });

  EigenResult res;
  res.dim = dim;
  res.values.resize(n);
  res.vectors.resize(n * n);
  for (std::size_t m = 0; m < n; ++m) {
    const auto src = static_cast<std::size_t>(order[m]);
    res.values[m] = a[src * n + src].real();
    // column src of v, phase-fixed on the largest component
    std::size_t imax = 0;
    double amax = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double mag = std::abs(v[k * n + src]);
      if (mag > amax) {
        amax = mag;
        imax = k;
      }
    }
    cplx phase{1.0, 0.0};
    if (amax > 0.0) phase = std::abs(v[imax * n + src]) / v[imax * n + src];
    for (std::size_t k = 0; k < n; ++k) res.vectors[m * n + k] = v[k * n + src] * phase;
  }
  return res;
}

}  // namespace cf
