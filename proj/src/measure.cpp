#include "polyesd/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace polyesd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double snap(double r) { return r < kZeroAtomRadius ? 0.0 : r; }

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<cplx> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw DimensionError("empirical measure needs at least one atom");
  radii_.reserve(atoms_.size());
  for (const cplx& a : atoms_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw NonFiniteError("empirical measure atoms must be finite");
    }
    radii_.push_back(snap(std::abs(a)));
  }
  std::sort(radii_.begin(), radii_.end());
}

EmpiricalMeasure EmpiricalMeasure::from_reals(std::span<const double> values) {
  return EmpiricalMeasure(std::vector<cplx>(values.begin(), values.end()));
}

double EmpiricalMeasure::radial_cdf(double r) const {
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), r);
  return static_cast<double>(it - radii_.begin()) * atom_weight();
}

double EmpiricalMeasure::zero_fraction() const {
  const auto it = std::upper_bound(radii_.begin(), radii_.end(), 0.0);
  return static_cast<double>(it - radii_.begin()) * atom_weight();
}

double EmpiricalMeasure::log_potential(cplx z) const {
  double s = 0.0;
  for (const cplx& a : atoms_) s += std::log(std::abs(z - a));
  return s * atom_weight();
}

EmpiricalMeasure esd(std::vector<cplx> eigenvalues) { return EmpiricalMeasure(std::move(eigenvalues)); }

EmpiricalMeasure esd(std::span<const std::vector<cplx>> trials) {
  std::size_t total = 0;
  for (const auto& t : trials) total += t.size();
  std::vector<cplx> atoms;
  atoms.reserve(total);
  for (const auto& t : trials) atoms.insert(atoms.end(), t.begin(), t.end());
  return EmpiricalMeasure(std::move(atoms));
}

double empirical_log_potential(const MatrixPolynomial& p, cplx z) {
  const double nk = static_cast<double>(p.size()) * p.degree();
  return log_abs_det(lu_factor(evaluate(p, z))) / nk;
}

double singular_value_log_potential(const MatrixPolynomial& p, cplx z) {
  const double nk = static_cast<double>(p.size()) * p.degree();
  double s = 0.0;
  for (double sv : singular_values(evaluate(p, z))) s += std::log(sv);
  return s / nk;
}

double eigenvalue_log_potential(const MatrixPolynomial& p, std::span<const cplx> eigenvalues, cplx z) {
  const double nk = static_cast<double>(p.size()) * p.degree();
  double s = log_abs_det(lu_factor(p.coefficient(p.degree())));
  for (const cplx& l : eigenvalues) s += std::log(std::abs(z - l));
  return s / nk;
}

std::vector<PotentialRow> potential_convergence_check(std::span<const PotentialSample> ensemble,
                                                      std::span<const cplx> grid,
                                                      double exclusion_radius) {
  if (ensemble.empty()) throw DimensionError("potential check needs at least one sample");
  const WeightSequence& w = ensemble.front().poly.weights();
  for (const auto& s : ensemble) {
    if (!(s.poly.weights() == w)) throw InvalidScheme("ensemble samples must share weights");
  }
  std::vector<double> lead(ensemble.size());
  for (std::size_t t = 0; t < ensemble.size(); ++t) {
    const MatrixPolynomial& p = ensemble[t].poly;
    lead[t] = log_abs_det(lu_factor(p.coefficient(p.degree())));
  }

  std::vector<PotentialRow> rows;
  rows.reserve(grid.size());
  for (const cplx z : grid) {
    PotentialRow row;
    row.z = z;
    row.theoretical = log_variance_potential(w, z);
    for (const auto& s : ensemble) {
      for (const cplx& l : s.eigenvalues) {
        if (std::abs(z - l) < exclusion_radius) row.excluded = true;
      }
    }
    if (row.excluded) {
      row.empirical = row.gap = row.det_route = kNaN;
      rows.push_back(row);
      continue;
    }
    double atoms = 0.0, det = 0.0;
    for (std::size_t t = 0; t < ensemble.size(); ++t) {
      const MatrixPolynomial& p = ensemble[t].poly;
      const double nk = static_cast<double>(p.size()) * p.degree();
      double s = 0.0;
      for (const cplx& l : ensemble[t].eigenvalues) s += std::log(std::abs(z - l));
      atoms += s / nk;
      det += empirical_log_potential(p, z) - lead[t] / nk;
    }
    const double m = static_cast<double>(ensemble.size());
    row.empirical = atoms / m;
    row.det_route = det / m;
    row.gap = std::abs(row.empirical - row.theoretical);
    rows.push_back(row);
  }
  return rows;
}

double ks_radial(const EmpiricalMeasure& measure, const RadialLaw& law) {
  const auto& r = measure.sorted_radii();
  const double n = static_cast<double>(r.size());
  double d = 0.0;
  for (std::size_t i = 0; i < r.size();) {
    std::size_t j = i;
    while (j < r.size() && r[j] == r[i]) ++j;
    d = std::max(d, std::abs(static_cast<double>(j) / n - law.cdf(r[i])));
    d = std::max(d, std::abs(static_cast<double>(i) / n - law.cdf_left(r[i])));
    i = j;
  }
  for (double t : law.jumps()) {
    const auto lo = std::lower_bound(r.begin(), r.end(), t) - r.begin();
    const auto hi = std::upper_bound(r.begin(), r.end(), t) - r.begin();
    d = std::max(d, std::abs(static_cast<double>(hi) / n - law.cdf(t)));
    d = std::max(d, std::abs(static_cast<double>(lo) / n - law.cdf_left(t)));
  }
  return std::min(d, 1.0);
}

double angular_ks(const EmpiricalMeasure& measure) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::vector<double> u;
  u.reserve(measure.size());
  for (const cplx& a : measure.atoms()) {
    if (std::abs(a) < kZeroAtomRadius) continue;
    double t = std::arg(a);
    if (t < 0.0) t += kTwoPi;
    u.push_back(std::min(t / kTwoPi, 1.0));
  }
  if (u.empty()) return 0.0;
  std::sort(u.begin(), u.end());
  const double m = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    d = std::max({d, static_cast<double>(i + 1) / m - u[i], u[i] - static_cast<double>(i) / m});
  }
  return d;
}

FitReport fit(const EmpiricalMeasure& measure, const RadialLaw& law) {
  FitReport rep;
  rep.sample_count = measure.size();
  rep.ks_radial = ks_radial(measure, law);
  rep.angular_ks = angular_ks(measure);
  const auto edges = law.annulus_edges();
  const auto& r = measure.sorted_radii();
  const double n = static_cast<double>(r.size());
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    AnnulusRow row{edges[b], edges[b + 1], 0.0, 0.0};
    const auto lo = std::lower_bound(r.begin(), r.end(), row.r_lo);
    const auto hi = std::lower_bound(r.begin(), r.end(), row.r_hi);
    row.empirical = static_cast<double>(hi - lo) / n;
    const double f_hi = std::isinf(row.r_hi) ? 1.0 : law.cdf_left(row.r_hi);
    row.theoretical = std::clamp(f_hi - law.cdf_left(row.r_lo), 0.0, 1.0);
    rep.annulus_table.push_back(row);
  }
  return rep;
}

double mp_fit(std::span<const double> values, double scale) {
  if (values.empty()) throw DimensionError("mp_fit needs at least one value");
  if (!(scale > 0.0)) throw std::invalid_argument("mp_fit scale must be positive");
  std::vector<double> x(values.begin(), values.end());
  for (double& v : x) {
    if (!(v >= 0.0)) throw std::invalid_argument("singular values must be nonnegative");
    v /= scale;
  }
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = marchenko_pastur_cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double mass_in_annulus(const EmpiricalMeasure& measure, double r_lo, double r_hi) {
  const auto& r = measure.sorted_radii();
  const auto lo = std::lower_bound(r.begin(), r.end(), r_lo);
  const auto hi = std::upper_bound(r.begin(), r.end(), r_hi);
  return hi > lo ? static_cast<double>(hi - lo) * measure.atom_weight() : 0.0;
}

double binned_tv(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double extent, int bins) {
  if (!(extent > 0.0) || bins < 1) throw std::invalid_argument("binned_tv needs extent > 0 and bins >= 1");
  const auto nb = static_cast<std::size_t>(bins);
  std::vector<double> h(nb * nb + 1, 0.0);
  auto add = [&](const EmpiricalMeasure& m, double sign) {
    const double w = sign * m.atom_weight();
    for (const cplx& z : m.atoms()) {
      const double x = (z.real() + extent) / (2.0 * extent) * bins;
      const double y = (z.imag() + extent) / (2.0 * extent) * bins;
      if (x < 0.0 || y < 0.0 || x >= bins || y >= bins) {
        h.back() += w;
      } else {
        h[static_cast<std::size_t>(y) * nb + static_cast<std::size_t>(x)] += w;
      }
    }
  };
  add(a, 1.0);
  add(b, -1.0);
  double s = 0.0;
  for (double v : h) s += std::abs(v);
  return 0.5 * s;
}

std::vector<HistogramBin> radial_histogram(const EmpiricalMeasure& measure, std::span<const double> edges) {
  if (edges.size() < 2) throw DimensionError("histogram needs at least two edges");
  if (!std::is_sorted(edges.begin(), edges.end())) throw std::invalid_argument("histogram edges must be sorted");
  const auto& r = measure.sorted_radii();
  std::vector<HistogramBin> out;
  for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
    const bool last = b + 2 == edges.size();
    const auto lo = std::lower_bound(r.begin(), r.end(), edges[b]);
    const auto hi = last ? std::upper_bound(r.begin(), r.end(), edges[b + 1])
                         : std::lower_bound(r.begin(), r.end(), edges[b + 1]);
    out.push_back({edges[b], edges[b + 1], static_cast<std::size_t>(hi - lo)});
  }
  return out;
}

}  // namespace polyesd
