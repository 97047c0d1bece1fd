#include "polyesd/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "polyesd/measure.hpp"

namespace polyesd {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

cplx random_point(Stream& s, double rmax) {
  return std::polar(rmax * s.uniform(), 2.0 * std::numbers::pi * s.uniform());
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

CheckResult unit_mass() {
  double worst = 0.0;
  for (double c : {0.5, 1.0, 2.0}) {
    for (const auto& s : {WeightScheme::kac(c), WeightScheme::elliptic(c), WeightScheme::weyl(c)}) {
      const auto d = LimitDensity::from_scheme(s, 6);
      worst = std::max(worst, std::abs(d.atom_mass + d.integrated_mass() - 1.0));
    }
  }
  const auto d = LimitDensity::from_weights(WeightSequence::from_magnitudes(std::vector<double>{0.0, 0.3, 2.0, 1.0}));
  worst = std::max(worst, std::abs(d.atom_mass + d.integrated_mass() - 1.0));
  return {"unit_mass", worst < 1e-6, "max |mass - 1| = " + fmt(worst)};
}

CheckResult closed_forms(Stream& rng) {
  double worst_kac = 0.0, worst_weyl = 0.0, worst_ell = 0.0;
  for (int i = 0; i < 30; ++i) {
    const cplx z = random_point(rng, 3.0);
    for (double c : {0.5, 2.0}) {
      if (std::abs(c * std::abs(z) - 1.0) > 1e-3) {
        const auto w = WeightSequence::from_scheme(WeightScheme::kac(c), 5);
        worst_kac = std::max(worst_kac, rel(density_kac(c, 5, z), density_general(w, z)));
      }
      const auto ww = WeightSequence::from_scheme(WeightScheme::weyl(c), 8);
      worst_weyl = std::max(worst_weyl, rel(density_weyl(c, 8, z), density_general(ww, z)));
      for (int k : {2, 5, 9}) {
        const auto we = WeightSequence::from_scheme(WeightScheme::elliptic(c), k);
        worst_ell = std::max(worst_ell, rel(density_general(we, z), density_elliptic(c, z)));
      }
    }
  }
  const bool ok = worst_kac < 1e-6 && worst_weyl < 1e-6 && worst_ell < 1e-8;
  return {"closed_form_equivalence", ok,
          "kac " + fmt(worst_kac) + ", weyl " + fmt(worst_weyl) + ", elliptic " + fmt(worst_ell)};
}

ComplexMatrix random_matrix(std::size_t r, std::size_t c, Stream& rng) {
  ComplexMatrix m(r, c);
  for (auto& x : m.entries()) x = sample_scalar(Distribution::complex_gaussian, rng);
  return m;
}

CheckResult weyl_inequalities(Stream& rng) {
  bool ok = true;
  for (int t = 0; t < 20 && ok; ++t) {
    const std::size_t n = 2 + static_cast<std::size_t>(t) % 14;
    const ComplexMatrix a = random_matrix(n, n, rng);
    auto lam = eigenvalues(a);
    std::vector<double> mod(lam.size());
    std::transform(lam.begin(), lam.end(), mod.begin(), [](cplx z) { return std::abs(z); });
    std::sort(mod.rbegin(), mod.rend());
    const auto sv = singular_values(a);
    double pl = 0.0, ps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      pl += std::log(mod[i]);
      ps += std::log(sv[i]);
      if (pl > ps + std::log1p(1e-8)) ok = false;
    }
  }
  return {"weyl_inequalities", ok, ok ? "20 matrices" : "violated"};
}

CheckResult interlacing(Stream& rng) {
  bool ok = true;
  for (int t = 0; t < 20 && ok; ++t) {
    const std::size_t m = 3 + static_cast<std::size_t>(t) % 10, n = 2 + static_cast<std::size_t>(t * 7) % 12;
    const ComplexMatrix a = random_matrix(m, n, rng);
    const std::size_t p = 1 + static_cast<std::size_t>(rng.bits() % m), q = 1 + static_cast<std::size_t>(rng.bits() % n);
    const auto sa = singular_values(a);
    const auto sb = singular_values(a.block(0, 0, p, q));
    for (std::size_t i = 0; i < std::min(p, q); ++i) {
      if (sa[i] < sb[i] - 1e-10) ok = false;
    }
  }
  return {"submatrix_interlacing", ok, ok ? "20 matrices" : "violated"};
}

CheckResult quarter_circle(Stream& rng) {
  std::vector<double> exact(20000);
  for (double& x : exact) x = marchenko_pastur_quantile(rng.uniform());
  const double ks_exact = mp_fit(exact, 1.0);
  const std::size_t n = 200;
  const auto sv = singular_values(sample_matrix(Distribution::uniform_square, n, rng));
  const double ks_matrix = mp_fit(sv, std::sqrt(static_cast<double>(n)));
  return {"quarter_circle", ks_exact < 0.02 && ks_matrix < 0.05,
          "exact-sample KS " + fmt(ks_exact) + ", matrix KS " + fmt(ks_matrix)};
}

CheckResult linearization(std::uint64_t seed) {
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + static_cast<std::size_t>(t) % 4;
    const int k = 1 + t % 3;
    const auto p = build(WeightScheme::kac(1.0), Distribution::complex_gaussian, n, k, seed, 1000 + t);
    for (const cplx l : eigenvalues_of(p)) {
      double scale = 0.0;
      for (int j = 0; j <= k; ++j) scale += std::pow(std::abs(l), j) * singular_values(p.coefficient(j)).front();
      worst = std::max(worst, singular_values(evaluate(p, l)).back() / scale);
    }
  }
  return {"linearization_residual", worst < 1e-6, "max backward residual = " + fmt(worst)};
}

CheckResult potential_identity(std::uint64_t seed, Stream& rng) {
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const auto p = build(WeightScheme::elliptic(1.0), Distribution::uniform_disk, 3 + t, 2, seed, 2000 + t);
    const cplx z = random_point(rng, 2.5);
    const double det = empirical_log_potential(p, z);
    const double sv = singular_value_log_potential(p, z);
    const double ev = eigenvalue_log_potential(p, eigenvalues_of(p), z);
    worst = std::max({worst, std::abs(det - sv), std::abs(det - ev)});
  }
  return {"potential_identity", worst < 1e-6, "max route disagreement = " + fmt(worst)};
}

}  // namespace

std::vector<CheckResult> run_validation(std::uint64_t seed) {
  Stream rng(SeedSpec{seed, 0xfeed, 0});
  std::vector<CheckResult> out;
  out.push_back(unit_mass());
  out.push_back(closed_forms(rng));
  out.push_back(weyl_inequalities(rng));
  out.push_back(interlacing(rng));
  out.push_back(quarter_circle(rng));
  out.push_back(linearization(seed));
  out.push_back(potential_identity(seed, rng));
  return out;
}

}  // namespace polyesd
