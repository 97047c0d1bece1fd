#include <algorithm>
#include <cmath>
#include <limits>

#include "polyesd/linalg.hpp"

namespace polyesd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min() / kEps;

double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

// G = [[c, s], [-conj(s), c]] maps (x, y) to (r, 0).
struct Givens {
  double c;
  cplx s;
};

Givens make_givens(cplx x, cplx y) {
  if (y == cplx{}) return {1.0, cplx{}};
  if (x == cplx{}) return {0.0, cplx{1.0, 0.0}};
  const double ax = std::abs(x);
  const double rho = std::hypot(ax, std::abs(y));
  return {ax / rho, (x / ax) * std::conj(y) / rho};
}

// Eigenvalue of the trailing 2x2 block [[a, b], [c, d]] closest to d.
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx bc = b * c;
  if (bc == cplx{}) return d;
  const cplx delta = 0.5 * (a - d);
  cplx s = std::sqrt(delta * delta + bc);
  if (std::abs(delta + s) < std::abs(delta - s)) s = -s;
  const cplx den = delta + s;
  if (den == cplx{}) return d;
  return d - bc / den;
}

}  // namespace

namespace detail {

ComplexMatrix balance(const ComplexMatrix& a, std::vector<double>* scaling) {
  if (!a.is_square()) throw DimensionError("balance needs a square matrix");
  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  constexpr double fmax = 0x1p500;
  const std::size_t n = a.rows();
  ComplexMatrix m = a;
  std::vector<double> d(n, 1.0);

  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(m(j, i));
        r += abs1(m(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g && f < fmax) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c >= g && f > 1.0 / fmax) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        d[i] *= f;
        const double ginv = 1.0 / f;
        cplx* ri = m.row(i);
        for (std::size_t j = 0; j < n; ++j) ri[j] *= ginv;
        for (std::size_t j = 0; j < n; ++j) m(j, i) *= f;
      }
    }
  }
  if (scaling) *scaling = std::move(d);
  return m;
}

ComplexMatrix hessenberg(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("hessenberg needs a square matrix");
  const std::size_t n = a.rows();
  ComplexMatrix h = a;
  std::vector<cplx> v(n), w(n);

  for (std::size_t j = 0; j + 2 < n; ++j) {
    const std::size_t len = n - j - 1;
    double scale = 0.0;
    for (std::size_t i = 0; i < len; ++i) scale = std::max(scale, std::abs(h(j + 1 + i, j)));
    double below = 0.0;
    for (std::size_t i = 1; i < len; ++i) below = std::max(below, std::abs(h(j + 1 + i, j)));
    if (below == 0.0) continue;

    double ss = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      v[i] = h(j + 1 + i, j) / scale;
      ss += std::norm(v[i]);
    }
    const double alpha = std::sqrt(ss);
    const cplx x0 = v[0];
    const double ax0 = std::abs(x0);
    const cplx phase = ax0 == 0.0 ? cplx{1.0, 0.0} : x0 / ax0;
    v[0] += phase * alpha;
    // I - beta v v^H with v^H v = 2 alpha (alpha + |x0|)
    const double beta = 1.0 / (alpha * (alpha + ax0));

    // left: rows j+1.., columns j..
    std::fill(w.begin(), w.begin() + (n - j), cplx{});
    for (std::size_t i = 0; i < len; ++i) {
      const cplx vi = std::conj(v[i]);
      const cplx* hr = h.row(j + 1 + i) + j;
      for (std::size_t c = 0; c < n - j; ++c) w[c] += vi * hr[c];
    }
    for (std::size_t i = 0; i < len; ++i) {
      const cplx f = beta * v[i];
      cplx* hr = h.row(j + 1 + i) + j;
      for (std::size_t c = 0; c < n - j; ++c) hr[c] -= f * w[c];
    }
    // right: all rows, columns j+1..
    for (std::size_t r = 0; r < n; ++r) {
      cplx* hr = h.row(r) + j + 1;
      cplx sum{};
      for (std::size_t i = 0; i < len; ++i) sum += hr[i] * v[i];
      const cplx f = beta * sum;
      for (std::size_t i = 0; i < len; ++i) hr[i] -= f * std::conj(v[i]);
    }
    h(j + 1, j) = -phase * (alpha * scale);
    for (std::size_t i = j + 2; i < n; ++i) h(i, j) = cplx{};
  }
  return h;
}

std::vector<cplx> hessenberg_qr(ComplexMatrix& h, std::size_t max_sweeps) {
  const std::size_t n = h.rows();
  std::vector<cplx> eig(n);
  if (n == 0) return eig;

  std::size_t sweeps = 0;
  std::size_t its = 0;
  std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;

  while (hi >= 0) {
    // locate the start of the unreduced block ending at hi
    std::ptrdiff_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      if (sub <= kSafeMin) break;
      double tst = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (tst == 0.0) {
        if (lo - 2 >= 0) tst += std::abs(h(lo - 1, lo - 2).real());
        if (lo + 1 <= hi) tst += std::abs(h(lo + 1, lo).real());
      }
      if (sub <= kEps * tst) break;
      --lo;
    }
    if (lo > 0) h(lo, lo - 1) = cplx{};

    if (lo == hi) {
      eig[hi] = h(hi, hi);
      --hi;
      its = 0;
      continue;
    }

    if (sweeps >= max_sweeps) throw ConvergenceError(n - 1 - hi, n);
    ++sweeps;
    ++its;

    cplx mu;
    if (its % 30 == 10) {
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1).real());
    } else if (its % 30 == 20) {
      mu = h(lo, lo) + 0.75 * std::abs(h(lo + 1, lo).real());
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    for (std::ptrdiff_t k = lo; k < hi; ++k) {
      Givens g = k == lo ? make_givens(h(lo, lo) - mu, h(lo + 1, lo))
                         : make_givens(h(k, k - 1), h(k + 1, k - 1));
      const std::ptrdiff_t c0 = std::max(lo, k - 1);
      cplx* rk = h.row(k);
      cplx* rk1 = h.row(k + 1);
      const cplx sc = std::conj(g.s);
      for (std::ptrdiff_t j = c0; j <= hi; ++j) {
        const cplx a = rk[j], b = rk1[j];
        rk[j] = g.c * a + g.s * b;
        rk1[j] = g.c * b - sc * a;
      }
      if (k > lo) h(k + 1, k - 1) = cplx{};
      const std::ptrdiff_t r1 = std::min(k + 2, hi);
      for (std::ptrdiff_t i = lo; i <= r1; ++i) {
        cplx* ri = h.row(i);
        const cplx a = ri[k], b = ri[k + 1];
        ri[k] = g.c * a + sc * b;
        ri[k + 1] = g.c * b - g.s * a;
      }
    }
  }
  return eig;
}

}  // namespace detail

std::vector<cplx> eigenvalues(const ComplexMatrix& a, const EigenOptions& opts) {
  if (!a.is_square()) throw DimensionError("eigenvalues needs a square matrix");
  const std::size_t n = a.rows();
  if (n == 0) throw DimensionError("eigenvalues of an empty matrix");
  if (n == 1) return {a(0, 0)};
  ComplexMatrix h = detail::hessenberg(opts.balance ? detail::balance(a) : a);
  return detail::hessenberg_qr(h, opts.max_sweeps_per_row * n);
}

}  // namespace polyesd
