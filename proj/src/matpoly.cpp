#include "polyesd/matpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace polyesd {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kac: return "kac";
    case SchemeKind::elliptic: return "elliptic";
    case SchemeKind::weyl: return "weyl";
    case SchemeKind::hyperbolic: return "hyperbolic";
    case SchemeKind::custom: return "custom";
  }
  return "unknown";
}

std::optional<SchemeKind> parse_scheme_kind(std::string_view name) {
  for (SchemeKind k : {SchemeKind::kac, SchemeKind::elliptic, SchemeKind::weyl,
                       SchemeKind::hyperbolic, SchemeKind::custom}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

WeightSequence WeightSequence::from_log(std::vector<double> log_abs) {
  if (log_abs.size() < 2) throw InvalidScheme("weight sequence needs degree >= 1");
  const double lead = log_abs.back();
  if (!std::isfinite(lead)) throw InvalidScheme("leading weight must be nonzero and finite");
  WeightSequence w;
  w.log_ = std::move(log_abs);
  for (double& x : w.log_) {
    if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) {
      throw InvalidScheme("weights must be finite and nonnegative");
    }
    x -= lead;
  }
  w.p_ = 0;
  while (w.log_[static_cast<std::size_t>(w.p_)] == kNegInf) ++w.p_;
  return w;
}

WeightSequence WeightSequence::from_magnitudes(std::span<const double> magnitudes) {
  std::vector<double> l(magnitudes.size());
  for (std::size_t j = 0; j < magnitudes.size(); ++j) {
    const double m = magnitudes[j];
    if (!(m >= 0.0) || !std::isfinite(m)) throw InvalidScheme("weights must be finite and >= 0");
    l[j] = m == 0.0 ? kNegInf : std::log(m);
  }
  if (!l.empty() && l.back() == kNegInf) throw InvalidScheme("leading weight must be nonzero");
  return from_log(std::move(l));
}

WeightSequence WeightSequence::from_scheme(const WeightScheme& s, int k) {
  if (k < 1) throw InvalidScheme("degree must be >= 1");
  if (s.kind == SchemeKind::custom) {
    if (s.custom.size() != static_cast<std::size_t>(k) + 1) {
      throw InvalidScheme("custom weights need k+1 = " + std::to_string(k + 1) + " entries");
    }
    return from_magnitudes(s.custom);
  }
  if (!(s.c > 0.0) || !std::isfinite(s.c)) throw InvalidScheme("scale c must be positive");
  if (s.kind == SchemeKind::hyperbolic && !(s.d > 0.0)) throw InvalidScheme("d must be positive");
  const double lc = std::log(s.c);
  const double lgk1 = std::lgamma(k + 1.0);
  std::vector<double> l(static_cast<std::size_t>(k) + 1);
  for (int j = 0; j <= k; ++j) {
    double half_log_sq = 0.0;  // ½ log of |α_j|² / c^{2j}
    switch (s.kind) {
      case SchemeKind::kac: break;
      case SchemeKind::elliptic:
        half_log_sq = 0.5 * (lgk1 - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0));
        break;
      case SchemeKind::weyl:
        half_log_sq = 0.5 * (j * std::log(static_cast<double>(k)) - std::lgamma(j + 1.0));
        break;
      case SchemeKind::hyperbolic:
        half_log_sq = 0.5 * (std::lgamma(s.d + j) - std::lgamma(s.d) - std::lgamma(j + 1.0));
        break;
      case SchemeKind::custom: break;
    }
    l[static_cast<std::size_t>(j)] = half_log_sq + j * lc;
  }
  return from_log(std::move(l));
}

std::vector<double> WeightSequence::magnitudes() const {
  std::vector<double> m(log_.size());
  std::transform(log_.begin(), log_.end(), m.begin(), [](double x) { return std::exp(x); });
  return m;
}

WeightSequence WeightSequence::shifted() const {
  return from_log(std::vector<double>(log_.begin() + p_, log_.end()));
}

std::vector<double> weights(const WeightScheme& scheme, int k) {
  std::vector<double> w = WeightSequence::from_scheme(scheme, k).magnitudes();
  for (double x : w) {
    if (!std::isfinite(x)) throw InvalidScheme("weights overflow double range at this degree");
  }
  return w;
}

MatrixPolynomial::MatrixPolynomial(std::vector<ComplexMatrix> weighted_coeffs,
                                   WeightSequence weights)
    : coeffs_(std::move(weighted_coeffs)), weights_(std::move(weights)) {
  if (coeffs_.size() < 2) throw DimensionError("matrix polynomial needs degree >= 1");
  if (static_cast<int>(coeffs_.size()) != weights_.degree() + 1) {
    throw DimensionError("coefficient count does not match weight count");
  }
  n_ = coeffs_.front().rows();
  if (n_ == 0) throw DimensionError("coefficients must be at least 1x1");
  for (const ComplexMatrix& c : coeffs_) {
    if (c.rows() != n_ || c.cols() != n_) throw DimensionError("coefficients must be n x n");
  }
  if (coeffs_.back().max_abs() == 0.0) throw InvalidScheme("leading coefficient is the zero matrix");
}

MatrixPolynomial MatrixPolynomial::from_coefficients(std::vector<ComplexMatrix> coeffs) {
  std::vector<double> mags(coeffs.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) mags[j] = coeffs[j].max_abs() == 0.0 ? 0.0 : 1.0;
  if (!coeffs.empty() && mags.back() == 0.0) throw InvalidScheme("leading coefficient is the zero matrix");
  WeightSequence w = WeightSequence::from_magnitudes(mags);
  return MatrixPolynomial(std::move(coeffs), std::move(w));
}

MatrixPolynomial MatrixPolynomial::shifted() const {
  const auto p = static_cast<std::size_t>(trailing_zeros());
  return MatrixPolynomial(std::vector<ComplexMatrix>(coeffs_.begin() + p, coeffs_.end()),
                          weights_.shifted());
}

MatrixPolynomial MatrixPolynomial::scaled(cplx s) const {
  if (s == cplx{}) throw InvalidScheme("scaling by zero");
  std::vector<ComplexMatrix> c = coeffs_;
  for (ComplexMatrix& m : c) m *= s;
  return MatrixPolynomial(std::move(c), weights_);
}

MatrixPolynomial build(const WeightScheme& scheme, std::span<const Distribution> dists,
                       std::size_t n, int k, std::uint64_t master_seed, std::uint64_t trial) {
  if (dists.size() != static_cast<std::size_t>(k) + 1) {
    throw DimensionError("need k+1 = " + std::to_string(k + 1) + " distributions, got " +
                         std::to_string(dists.size()));
  }
  if (n == 0) throw DimensionError("n must be >= 1");
  WeightSequence w = WeightSequence::from_scheme(scheme, k);
  std::vector<ComplexMatrix> coeffs;
  coeffs.reserve(dists.size());
  for (int j = 0; j <= k; ++j) {
    const double alpha = std::exp(w.log_abs(j));
    if (alpha == 0.0) {
      coeffs.emplace_back(n, n);
      continue;
    }
    Stream stream(SeedSpec{master_seed, trial, static_cast<std::uint64_t>(j)});
    ComplexMatrix c = sample_matrix(dists[static_cast<std::size_t>(j)], n, stream);
    c *= alpha;
    coeffs.push_back(std::move(c));
  }
  return MatrixPolynomial(std::move(coeffs), std::move(w));
}

MatrixPolynomial build(const WeightScheme& scheme, Distribution dist, std::size_t n, int k,
                       std::uint64_t master_seed, std::uint64_t trial) {
  std::vector<Distribution> d(static_cast<std::size_t>(k) + 1, dist);
  return build(scheme, d, n, k, master_seed, trial);
}

ComplexMatrix evaluate(const MatrixPolynomial& p, cplx z) {
  const auto& c = p.coefficients();
  ComplexMatrix acc = c.back();
  for (std::size_t j = c.size() - 1; j-- > 0;) {
    acc *= z;
    acc += c[j];
  }
  return acc;
}

double reciprocal_condition(const ComplexMatrix& a) {
  LUFactors f = lu_factor(a);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.lu(i, i) == cplx{}) return 0.0;
  }
  const double smax = singular_values(a).front();
  const double smax_inv = singular_values(f.inverse()).front();
  if (!std::isfinite(smax_inv) || smax_inv == 0.0) return 0.0;
  return 1.0 / (smax * smax_inv);
}

ComplexMatrix companion_matrix(const MatrixPolynomial& p) {
  const std::size_t n = p.size();
  const auto k = static_cast<std::size_t>(p.degree());
  const ComplexMatrix& lead = p.coefficient(p.degree());
  LUFactors f = lu_factor(lead);
  for (std::size_t i = 0; i < n; ++i) {
    if (f.lu(i, i) == cplx{}) throw SingularLeadingCoefficient(0.0);
  }
  const double rcond =
      n == 1 ? 1.0 : 1.0 / (singular_values(lead).front() * singular_values(f.inverse()).front());
  if (!(rcond >= kLeadingRcondThreshold)) throw SingularLeadingCoefficient(rcond);

  // [C_{k-1} | C_{k-2} | … | C_0] solved against C_k in one pass
  ComplexMatrix rhs(n, n * k);
  for (std::size_t b = 0; b < k; ++b) {
    const ComplexMatrix& c = p.coefficient(static_cast<int>(k - 1 - b));
    for (std::size_t i = 0; i < n; ++i) std::copy_n(c.row(i), n, rhs.row(i) + b * n);
  }
  ComplexMatrix x = f.solve(rhs);

  const std::size_t m = n * k;
  ComplexMatrix comp(m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) comp(i, j) = -x(i, j);
  for (std::size_t i = n; i < m; ++i) comp(i, i - n) = 1.0;
  return comp;
}

CompanionPencil companion_pencil(const MatrixPolynomial& p) {
  const std::size_t n = p.size();
  const auto k = static_cast<std::size_t>(p.degree());
  const std::size_t m = n * k;
  CompanionPencil out{ComplexMatrix(m, m), ComplexMatrix(m, m)};
  const ComplexMatrix& lead = p.coefficient(p.degree());
  for (std::size_t i = 0; i < n; ++i) std::copy_n(lead.row(i), n, out.a.row(i));
  for (std::size_t i = n; i < m; ++i) out.a(i, i) = 1.0;
  for (std::size_t b = 0; b < k; ++b) {
    const ComplexMatrix& c = p.coefficient(static_cast<int>(k - 1 - b));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out.b(i, b * n + j) = -c(i, j);
  }
  for (std::size_t i = n; i < m; ++i) out.b(i, i - n) = 1.0;
  return out;
}

namespace {

// ln Σ exp(x_j), ignoring -inf terms.
double log_sum_exp(const std::vector<double>& x) {
  const double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

// Logarithmic derivative f'/f of f = det P at z, by Horner on P and P'.
// Returns nullopt when P(z) is exactly singular.
std::optional<cplx> log_derivative_det(const std::vector<ComplexMatrix>& c, cplx z) {
  const std::size_t n = c.front().rows();
  const bool reversed = std::abs(z) > 1.0;
  const cplx w = reversed ? 1.0 / z : z;
  ComplexMatrix acc(n, n);
  ComplexMatrix dacc(n, n);
  for (std::size_t t = 0; t < c.size(); ++t) {
    const ComplexMatrix& ct = reversed ? c[t] : c[c.size() - 1 - t];
    dacc *= w;
    dacc += acc;
    acc *= w;
    acc += ct;
  }
  const LUFactors f = lu_factor(acc);
  for (std::size_t i = 0; i < n; ++i) {
    if (f.lu(i, i) == cplx{}) return std::nullopt;
  }
  const ComplexMatrix x = f.solve(dacc);
  cplx tr{};
  for (std::size_t i = 0; i < n; ++i) tr += x(i, i);
  if (!reversed) return tr;
  const double nk = static_cast<double>(n * (c.size() - 1));
  return w * (nk - w * tr);
}

}  // namespace

double predicted_backward_error(const MatrixPolynomial& p, cplx z) {
  const auto& c = p.coefficients();
  const double lr = std::log(std::abs(z));
  std::vector<double> powers(c.size());
  std::vector<double> weighted(c.size());
  double log_max = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double ln = std::log(c[j].frobenius_norm());
    powers[j] = j == 0 ? 0.0 : static_cast<double>(j) * lr;
    weighted[j] = powers[j] + ln;
    log_max = std::max(log_max, ln);
  }
  return std::numeric_limits<double>::epsilon() * std::exp(log_sum_exp(powers) + log_max - log_sum_exp(weighted));
}

void refine_eigenvalues(const MatrixPolynomial& p, std::vector<cplx>& z) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<char> active(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) active[i] = predicted_backward_error(p, z[i]) > kRefineThreshold;
  const auto& c = p.coefficients();
  for (int it = 0; it < kMaxAberthIterations; ++it) {
    bool any = false;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!active[i]) continue;
      const auto g = log_derivative_det(c, z[i]);
      if (!g || *g == cplx{}) {
        active[i] = 0;
        continue;
      }
      cplx repel{};
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (j != i && z[j] != z[i]) repel += 1.0 / (z[i] - z[j]);
      }
      const cplx d = 1.0 / (*g - repel);
      if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) {
        active[i] = 0;
        continue;
      }
      z[i] -= d;
      if (std::abs(d) <= 4.0 * eps * std::abs(z[i])) {
        active[i] = 0;
      } else {
        any = true;
      }
    }
    if (!any) break;
  }
}

std::vector<cplx> eigenvalues_of(const MatrixPolynomial& p, const EigenOptions& opts) {
  const std::size_t n = p.size();
  const auto zeros = n * static_cast<std::size_t>(p.trailing_zeros());
  std::vector<cplx> out;
  out.reserve(n * static_cast<std::size_t>(p.degree()));
  if (p.trailing_zeros() < p.degree()) {
    const MatrixPolynomial q = p.trailing_zeros() == 0 ? p : p.shifted();
    out = eigenvalues(companion_matrix(q), opts);
    refine_eigenvalues(q, out);
  }
  out.insert(out.end(), zeros, cplx{});
  return out;
}

}  // namespace polyesd
