#include <cmath>
#include <limits>
#include <numeric>

#include "polyesd/linalg.hpp"

namespace polyesd {

LUFactors lu_factor(const ComplexMatrix& a) {
  if (!a.is_square()) {
    throw DimensionError("lu_factor needs a square matrix, got " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()));
  }
  const std::size_t n = a.rows();
  LUFactors f{a, std::vector<std::size_t>(n), 1};
  std::iota(f.pivots.begin(), f.pivots.end(), std::size_t{0});
  ComplexMatrix& m = f.lu;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(m(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv != k) {
      std::swap_ranges(m.row(k), m.row(k) + n, m.row(piv));
      std::swap(f.pivots[k], f.pivots[piv]);
      f.sign = -f.sign;
    }
    const cplx pivot = m(k, k);
    // singular column: leave the zero pivot in U and carry on
    if (pivot == cplx{}) continue;
    const cplx inv = 1.0 / pivot;
    const cplx* rk = m.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      cplx* ri = m.row(i);
      const cplx l = ri[k] * inv;
      ri[k] = l;
      if (l == cplx{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
    }
  }
  return f;
}

double log_abs_det(const LUFactors& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = std::abs(f.lu(i, i));
    if (d == 0.0) return -std::numeric_limits<double>::infinity();
    s += std::log(d);
  }
  return s;
}

ComplexMatrix LUFactors::lower() const {
  const std::size_t n = size();
  ComplexMatrix l = ComplexMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) l(i, j) = lu(i, j);
  return l;
}

ComplexMatrix LUFactors::upper() const {
  const std::size_t n = size();
  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) u(i, j) = lu(i, j);
  return u;
}

ComplexMatrix LUFactors::permute_rows(const ComplexMatrix& a) const {
  if (a.rows() != size()) throw DimensionError("row count mismatch in permute_rows");
  ComplexMatrix p(a.rows(), a.cols());
  for (std::size_t i = 0; i < size(); ++i)
    std::copy_n(a.row(pivots[i]), a.cols(), p.row(i));
  return p;
}

ComplexMatrix LUFactors::solve(const ComplexMatrix& b) const {
  const std::size_t n = size();
  if (b.rows() != n) throw DimensionError("right-hand side has wrong row count");
  for (std::size_t i = 0; i < n; ++i) {
    if (lu(i, i) == cplx{}) throw SingularMatrixError("solve with an exactly singular factor");
  }
  ComplexMatrix x = permute_rows(b);
  const std::size_t m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    cplx* xi = x.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const cplx l = lu(i, k);
      if (l == cplx{}) continue;
      const cplx* xk = x.row(k);
      for (std::size_t j = 0; j < m; ++j) xi[j] -= l * xk[j];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    cplx* xi = x.row(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const cplx u = lu(ii, k);
      if (u == cplx{}) continue;
      const cplx* xk = x.row(k);
      for (std::size_t j = 0; j < m; ++j) xi[j] -= u * xk[j];
    }
    const cplx inv = 1.0 / lu(ii, ii);
    for (std::size_t j = 0; j < m; ++j) xi[j] *= inv;
  }
  return x;
}

ComplexMatrix LUFactors::inverse() const { return solve(ComplexMatrix::identity(size())); }

}  // namespace polyesd
