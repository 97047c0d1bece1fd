#include <algorithm>
#include <cmath>
#include <limits>

#include "polyesd/linalg.hpp"

namespace polyesd {

namespace {

// Implicit QL on a real symmetric tridiagonal matrix; e[i] couples i and i+1.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(d.size());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (n > 0) e[n - 1] = 0.0;
  for (std::ptrdiff_t l = 0; l < n; ++l) {
    int iter = 0;
    std::ptrdiff_t m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw ConvergenceError(static_cast<std::size_t>(l), d.size());
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::ptrdiff_t i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
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
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("hermitian_eigenvalues needs a square matrix");
  const std::size_t n = a.rows();
  // full Hermitian copy from the lower triangle
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      m(i, j) = a(i, j);
      m(j, i) = std::conj(a(i, j));
    }
    m(i, i) = a(i, i).real();
  }

  std::vector<double> d(n), e(n, 0.0);
  std::vector<cplx> v(n), p(n);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const std::size_t len = n - j - 1;
    double scale = 0.0;
    for (std::size_t i = 0; i < len; ++i) scale = std::max(scale, std::abs(m(j + 1 + i, j)));
    d[j] = m(j, j).real();
    if (scale == 0.0) {
      e[j] = 0.0;
      continue;
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = m(j + 1 + i, j) / scale;
      ss += std::norm(v[i]);
    }
    const double alpha = std::sqrt(ss);
    // only |e| matters: a diagonal unitary makes the off-diagonal real
    e[j] = alpha * scale;
    if (len == 1) continue;
    const double ax0 = std::abs(v[0]);
    const cplx phase = ax0 == 0.0 ? cplx{1.0, 0.0} : v[0] / ax0;
    v[0] += phase * alpha;
    const double beta = 1.0 / (alpha * (alpha + ax0));

    // p = beta * A_sub v
    cplx vhp{};
    for (std::size_t r = 0; r < len; ++r) {
      const cplx* mr = m.row(j + 1 + r) + j + 1;
      cplx sum{};
      for (std::size_t c = 0; c < len; ++c) sum += mr[c] * v[c];
      p[r] = beta * sum;
      vhp += std::conj(v[r]) * p[r];
    }
    const double kk = 0.5 * beta * vhp.real();
    for (std::size_t r = 0; r < len; ++r) p[r] -= kk * v[r];
    // A_sub -= v w^H + w v^H
    for (std::size_t r = 0; r < len; ++r) {
      cplx* mr = m.row(j + 1 + r) + j + 1;
      const cplx vr = v[r], wr = p[r];
      for (std::size_t c = 0; c < len; ++c) mr[c] -= vr * std::conj(p[c]) + wr * std::conj(v[c]);
    }
  }
  if (n > 0) d[n - 1] = m(n - 1, n - 1).real();

  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  const std::size_t k = std::min(rows, cols);
  if (k == 0) return {};
  const double scale = a.max_abs();
  if (scale == 0.0) return std::vector<double>(k, 0.0);

  // Gram matrix of the smaller side, from the scaled input
  ComplexMatrix g(k, k);
  const double inv = 1.0 / scale;
  if (rows >= cols) {
    std::vector<cplx> r(cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) r[j] = a(i, j) * inv;
      for (std::size_t p = 0; p < cols; ++p) {
        const cplx cp = std::conj(r[p]);
        cplx* gp = g.row(p);
        for (std::size_t q = 0; q <= p; ++q) gp[q] += cp * r[q];
      }
    }
  } else {
    for (std::size_t p = 0; p < rows; ++p) {
      for (std::size_t q = 0; q <= p; ++q) {
        cplx sum{};
        for (std::size_t j = 0; j < cols; ++j) sum += a(p, j) * std::conj(a(q, j));
        g(p, q) = sum * (inv * inv);
      }
    }
  }

  std::vector<double> ev = hermitian_eigenvalues(g);
  std::vector<double> sv(k);
  for (std::size_t i = 0; i < k; ++i) sv[i] = scale * std::sqrt(std::max(0.0, ev[k - 1 - i]));
  return sv;
}

}  // namespace polyesd
