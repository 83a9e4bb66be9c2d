#include "tg/eigen_sym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tg/errors.hpp"

namespace tg {

namespace {

// Householder tridiagonalisation, lower triangle driven (after tred2,
// without accumulating the transformation). d gets the diagonal, e the
// subdiagonal with e[0] = 0.
void tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& d, std::vector<double>& e,
                    bool parallel) {
  auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = n; i-- > 1;) {
    std::size_t l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (std::size_t k = 0; k <= l; ++k) scale += std::fabs(A(i, k));
      if (scale == 0.0) {
        e[i] = A(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          A(i, k) /= scale;
          h += A(i, k) * A(i, k);
        }
        double f = A(i, l);
        double g = f >= 0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        A(i, l) = f - g;
        // p = A u / h, stored in e[0..l]
        const long long L = static_cast<long long>(l);
#pragma omp parallel for schedule(static) if (parallel && l > 64)
        for (long long jj = 0; jj <= L; ++jj) {
          std::size_t j = static_cast<std::size_t>(jj);
          double gg = 0.0;
          for (std::size_t k = 0; k <= j; ++k) gg += A(j, k) * A(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) gg += A(k, j) * A(i, k);
          e[j] = gg / h;
        }
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) f += e[j] * A(i, j);
        double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) e[j] -= hh * A(i, j);
        // A -= u q^T + q u^T on the lower triangle
#pragma omp parallel for schedule(dynamic, 16) if (parallel && l > 64)
        for (long long jj = 0; jj <= L; ++jj) {
          std::size_t j = static_cast<std::size_t>(jj);
          double fj = A(i, j), gj = e[j];
          for (std::size_t k = 0; k <= j; ++k) A(j, k) -= fj * e[k] + gj * A(i, k);
        }
      }
    } else {
      e[i] = A(i, l);
    }
    d[i] = h;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = A(i, i);
  e[0] = 0.0;
}

// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (++iter > 60) throw Error("tridiagonal QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::fabs(r) : -std::fabs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool early = false;
        while (i-- > l) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            early = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (early) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

std::vector<double> eigenvalues(std::vector<double> a, std::size_t n, bool parallel) {
  if (a.size() != n * n) throw ShapeMismatch("matrix is not n x n");
  std::vector<double> d, e;
  tridiagonalize(a, n, d, e, parallel);
  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

std::vector<double> symmetric_eigenvalues_serial(std::vector<double> a, std::size_t n) {
  return eigenvalues(std::move(a), n, false);
}

std::vector<double> symmetric_eigenvalues_parallel(std::vector<double> a, std::size_t n) {
  return eigenvalues(std::move(a), n, true);
}

}  // namespace tg
