#include <cmath>
#include <limits>
#include <stdexcept>

#include "polyesd/theory.hpp"

namespace polyesd {

namespace {

constexpr int kMaxIter = 1'000'000;
constexpr double kTiny = 1e-300;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// ln of Σ x^n / (a (a+1) … (a+n)), the series part of γ(a, x).
double log_lower_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return std::log(sum);
}

// ln of the Lentz continued fraction h with Γ(a, x) = e^{-x} x^a h.
double log_upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::log(h);
}

}  // namespace

double log_upper_incomplete_gamma(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("incomplete gamma needs a > 0");
  if (!(x >= 0.0)) throw std::domain_error("incomplete gamma needs x >= 0");
  const double lga = std::lgamma(a);
  if (x == 0.0) return lga;
  if (x == std::numeric_limits<double>::infinity()) return -std::numeric_limits<double>::infinity();
  if (x < a + 1.0) {
    // Q = 1 - P stays bounded away from 0 on this side
    const double log_p = log_lower_series(a, x) - x + a * std::log(x) - lga;
    return lga + std::log1p(-std::exp(log_p));
  }
  return -x + a * std::log(x) + log_upper_fraction(a, x);
}

double upper_incomplete_gamma(double a, double x) { return std::exp(log_upper_incomplete_gamma(a, x)); }

}  // namespace polyesd
