#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "polyesd/theory.hpp"

namespace polyesd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// below this radius the r → 0 limit of Var/r² is used directly
constexpr double kTinyRadius = 1e-100;

struct Moments {
  double mean;
  double var;
};

// Mean and variance of j under e_j ∝ |α_{j+p}|² r^{2j}, j = 0..k-p.
Moments weighted_moments(const WeightSequence& w, double r) {
  const auto la = w.log_abs();
  const std::size_t p = static_cast<std::size_t>(w.trailing_zeros());
  const std::size_t m = la.size() - p;
  const double lr = std::log(r);
  double tmax = kNegInf;
  for (std::size_t j = 0; j < m; ++j) {
    if (la[p + j] == kNegInf) continue;
    tmax = std::max(tmax, 2.0 * la[p + j] + 2.0 * static_cast<double>(j) * lr);
  }
  double s0 = 0.0, s1 = 0.0;
  // two passes: mean first, then variance about it
  thread_local std::vector<double> e;
  e.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    if (la[p + j] == kNegInf) continue;
    e[j] = std::exp(2.0 * la[p + j] + 2.0 * static_cast<double>(j) * lr - tmax);
    s0 += e[j];
    s1 += static_cast<double>(j) * e[j];
  }
  const double mean = s1 / s0;
  double s2 = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double dj = static_cast<double>(j) - mean;
    s2 += e[j] * dj * dj;
  }
  return {mean, s2 / s0};
}

}  // namespace

double density_general(const WeightSequence& w, double r) {
  const int k = w.degree();
  const int p = w.trailing_zeros();
  if (p >= k) return 0.0;
  r = std::abs(r);
  if (r < kTinyRadius) {
    // f(0) = |α_{p+1}|² / (π k |α_p|²)
    const double l1 = w.log_abs(p + 1);
    if (l1 == kNegInf) {
      // leading behaviour is r^{2(q-1)} with q > 1, which vanishes at 0
      return 0.0;
    }
    return std::exp(2.0 * (l1 - w.log_abs(p))) / (kPi * k);
  }
  if (!std::isfinite(r)) return 0.0;
  const Moments m = weighted_moments(w, r);
  return m.var / (kPi * k * r * r);
}

double radial_cdf(const WeightSequence& w, double r) {
  if (r < 0.0 || std::isnan(r)) throw std::domain_error("radial_cdf needs r >= 0");
  const int k = w.degree();
  const int p = w.trailing_zeros();
  if (r == 0.0 || p >= k) return 0.0;
  if (r == std::numeric_limits<double>::infinity()) return static_cast<double>(k - p) / k;
  return weighted_moments(w, r).mean / k;
}

double density_kac(double c, int k, cplx z) {
  if (!(c > 0.0) || k < 1) throw InvalidScheme("kac density needs c > 0 and k >= 1");
  const double cr = c * std::abs(z);
  if (std::abs(cr - 1.0) < kKacCancellationBand) {
    return density_general(WeightSequence::from_scheme(WeightScheme::kac(c), k), z);
  }
  const double x = cr * cr;
  const double kp1 = k + 1.0;
  const double a = 1.0 / ((x - 1.0) * (x - 1.0));
  double b;
  if (x < 1.0) {
    const double xk = std::pow(x, k);
    const double den = xk * x - 1.0;
    b = kp1 * kp1 * xk / (den * den);
  } else {
    // divide through by x^{2k+2} so nothing overflows
    const double inv = std::pow(x, -kp1);
    const double den = 1.0 - inv;
    b = kp1 * kp1 * inv / (x * den * den);
  }
  return std::max(0.0, c * c / (kPi * k) * (a - b));
}

double density_weyl(double c, int k, cplx z) {
  if (!(c > 0.0) || k < 1) throw InvalidScheme("weyl density needs c > 0 and k >= 1");
  const double cr = c * std::abs(z);
  const double x = cr * cr;
  if (x == 0.0) return c * c / kPi;
  const double kd = k;
  if (kd * kd * x * x * x > kWeylCancellationLimit) {
    return density_general(WeightSequence::from_scheme(WeightScheme::weyl(c), k), z);
  }
  // Γ = e^{kx} ∫_x^∞ (e^{-s} s)^k ds = e^{kx} k^{-(k+1)} Γ(k+1, kx)
  const double log_gamma = kd * x - (kd + 1.0) * std::log(kd) + log_upper_incomplete_gamma(kd + 1.0, kd * x);
  const double lx = std::log(x);
  const double t1 = (kd + 1.0 - kd * x) * std::exp(kd * lx - std::log(kd) - log_gamma);
  const double t2 = std::exp((2.0 * kd + 1.0) * lx - std::log(kd) - 2.0 * log_gamma);
  return std::max(0.0, c * c * (1.0 - t1 - t2) / kPi);
}

double density_elliptic(double c, cplx z) {
  if (!(c > 0.0)) throw InvalidScheme("elliptic density needs c > 0");
  const double x = c * c * std::norm(z);
  return c * c / (kPi * (x + 1.0) * (x + 1.0));
}

double log_variance_potential(const WeightSequence& w, cplx z) {
  const auto la = w.log_abs();
  const double lr = std::log(std::abs(z));
  double tmax = kNegInf;
  for (std::size_t j = 0; j < la.size(); ++j) {
    if (la[j] == kNegInf) continue;
    const double t = j == 0 ? 2.0 * la[j] : 2.0 * la[j] + 2.0 * static_cast<double>(j) * lr;
    tmax = std::max(tmax, t);
  }
  double s = 0.0;
  for (std::size_t j = 0; j < la.size(); ++j) {
    if (la[j] == kNegInf) continue;
    const double t = j == 0 ? 2.0 * la[j] : 2.0 * la[j] + 2.0 * static_cast<double>(j) * lr;
    s += std::exp(t - tmax);
  }
  return (tmax + std::log(s)) / (2.0 * w.degree());
}

double polar_mass(const std::function<double(double)>& radial_density, double r_lo, double r_hi,
                  double tol) {
  using boost::math::quadrature::gauss_kronrod;
  // mapped onto [0, 1]: the library's local error estimate is not scaled by
  // the interval width, so short panels would never meet the tolerance
  const double w = r_hi - r_lo;
  auto integrand = [&](double t) {
    const double r = r_lo + w * t;
    return r * radial_density(r);
  };
  return 2.0 * kPi * w * gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, tol);
}

LimitDensity LimitDensity::from_weights(WeightSequence w) {
  LimitDensity d;
  d.k = w.degree();
  d.atom_mass = static_cast<double>(w.trailing_zeros()) / d.k;
  d.weights = std::move(w);
  return d;
}

LimitDensity LimitDensity::from_scheme(const WeightScheme& scheme, int k) {
  LimitDensity d = from_weights(WeightSequence::from_scheme(scheme, k));
  d.c = scheme.c;
  switch (scheme.kind) {
    case SchemeKind::kac: d.kind = DensityKind::kac; break;
    case SchemeKind::elliptic: d.kind = DensityKind::elliptic; break;
    case SchemeKind::weyl: d.kind = DensityKind::weyl; break;
    default: d.kind = DensityKind::generic; break;
  }
  return d;
}

double LimitDensity::density(cplx z) const {
  switch (kind) {
    case DensityKind::kac: return density_kac(c, k, z);
    case DensityKind::elliptic: return density_elliptic(c, z);
    case DensityKind::weyl: return density_weyl(c, k, z);
    case DensityKind::generic: break;
  }
  return density_general(weights, z);
}

double LimitDensity::cdf(double r) const {
  if (r < 0.0) return 0.0;
  return std::min(1.0, atom_mass + radial_cdf(weights, r));
}

double LimitDensity::quantile(double u) const {
  if (u <= atom_mass) return 0.0;
  if (u >= 1.0) return std::numeric_limits<double>::infinity();
  double lo = 1.0, hi = 1.0;
  while (cdf(hi) < u) hi *= 2.0;
  while (lo > 1e-300 && cdf(lo) >= u) lo *= 0.5;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = std::sqrt(lo * hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double LimitDensity::integrated_mass() const {
  const double cont = 1.0 - atom_mass;
  if (cont <= 0.0) return 0.0;
  // panels on a doubling grid from where the CDF is negligible to the tail bound
  double r_lo = 1.0;
  while (r_lo > 1e-300 && radial_cdf(weights, r_lo) > 1e-12) r_lo *= 0.5;
  double r_hi = 1.0;
  while (radial_cdf(weights, r_hi) < cont - 1e-12) r_hi *= 2.0;
  auto f = [this](double r) { return density_general(weights, r); };
  double mass = polar_mass(f, 0.0, r_lo);
  for (double a = r_lo; a < r_hi; a *= 2.0) mass += polar_mass(f, a, std::min(2.0 * a, r_hi));
  return mass;
}

double marchenko_pastur_density(double x) {
  if (x < 0.0 || x > 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / kPi;
}

double marchenko_pastur_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 2.0) return 1.0;
  // ∫_0^x √(4 − t²) dt = (x/2)√(4 − x²) + 2 asin(x/2)
  return (0.5 * x * std::sqrt(4.0 - x * x) + 2.0 * std::asin(0.5 * x)) / kPi;
}

double marchenko_pastur_quantile(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 2.0;
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (marchenko_pastur_cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace polyesd
