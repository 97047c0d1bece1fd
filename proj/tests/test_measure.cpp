#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "polyesd/measure.hpp"
#include "support/oracles.hpp"

using namespace polyesd;

namespace {

constexpr double kPi = std::numbers::pi;

// Textbook one-sample KS for distinct values and a continuous CDF.
template <class F>
double textbook_ks(std::vector<double> x, F cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

}  // namespace

TEST_CASE("empirical measure basics") {
  CHECK_THROWS_AS(EmpiricalMeasure({}), DimensionError);
  CHECK_THROWS_AS(EmpiricalMeasure({cplx(std::numeric_limits<double>::infinity(), 0)}), NonFiniteError);
  const EmpiricalMeasure delta({cplx{}});
  CHECK(delta.radial_cdf(0.0) == 1.0);
  CHECK(delta.zero_fraction() == 1.0);
  const EmpiricalMeasure pm({1.0, -1.0});
  CHECK(pm.radial_cdf(0.999) == 0.0);
  CHECK(pm.radial_cdf(1.0) == 1.0);
  CHECK(pm.atom_weight() == 0.5);
  CHECK(pm.log_potential(0.0) == doctest::Approx(0.0));
  CHECK(pm.log_potential(1.0) == -std::numeric_limits<double>::infinity());
  const EmpiricalMeasure tiny({cplx(1e-12, 0), 2.0});
  CHECK(tiny.sorted_radii().front() == 0.0);
  CHECK(tiny.zero_fraction() == 0.5);
}

TEST_CASE("pooled esd has n*k*trials atoms") {
  std::vector<std::vector<cplx>> trials;
  for (std::uint64_t t = 0; t < 3; ++t) trials.push_back(eigenvalues_of(build(WeightScheme::kac(1.0), Distribution::complex_gaussian, 50, 2, 1, t)));
  CHECK(esd(trials).size() == 300);
  CHECK(esd(trials.front()).size() == 100);
}

TEST_CASE("potential of a scalar linear polynomial") {
  const auto p = MatrixPolynomial::from_coefficients({ComplexMatrix{{-2.0}}, ComplexMatrix{{1.0}}});
  CHECK(empirical_log_potential(p, 3.0) == doctest::Approx(0.0));
  CHECK(eigenvalue_log_potential(p, eigenvalues_of(p), 3.0) == doctest::Approx(0.0));
}

TEST_CASE("three potential routes agree") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto p = build(WeightScheme::hyperbolic(1.0, 2.0), Distribution::uniform_disk, 2 + t % 5, 1 + static_cast<int>(t % 4), 2, t);
    const cplx z(u(rng), u(rng));
    const double det = empirical_log_potential(p, z);
    CHECK(singular_value_log_potential(p, z) == doctest::Approx(det).epsilon(1e-8).scale(1.0));
    CHECK(std::abs(eigenvalue_log_potential(p, eigenvalues_of(p), z) - det) < 1e-6);
  }
}

TEST_CASE("potential table") {
  std::vector<PotentialSample> ens;
  for (std::uint64_t t = 0; t < 4; ++t) {
    auto p = build(WeightScheme::kac(1.0), Distribution::complex_gaussian, 20, 2, 3, t);
    auto e = eigenvalues_of(p);
    ens.push_back({std::move(p), std::move(e)});
  }
  const std::vector<cplx> grid{3.0, cplx(0, 2), 1e6};
  const auto rows = potential_convergence_check(ens, grid);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].theoretical == doctest::Approx(0.25 * std::log(91.0)));
  CHECK(std::abs(rows[2].theoretical - std::log(1e6)) < 1e-10);
  for (const auto& r : rows) {
    CHECK_FALSE(r.excluded);
    CHECK(r.gap == doctest::Approx(std::abs(r.empirical - r.theoretical)));
    CHECK(std::abs(r.det_route - r.empirical) < 1e-6);
  }
  const std::vector<cplx> on_atom{ens[0].eigenvalues[0]};
  const auto ex = potential_convergence_check(ens, on_atom);
  CHECK(ex[0].excluded);
  CHECK(std::isnan(ex[0].empirical));
}

TEST_CASE("ks against an exact sample") {
  SUBCASE("fixed-degree density") {
    const RadialLaw law(LimitDensity::from_scheme(WeightScheme::kac(1.0), 2));
    Stream s(SeedSpec{4, 0, 0});
    const EmpiricalMeasure m(sample_law(law, 100000, s));
    const double ks = ks_radial(m, law);
    CHECK(ks < 0.01);
    CHECK(ks == doctest::Approx(textbook_ks(m.sorted_radii(), [&](double r) { return law.cdf(r); })).epsilon(1e-12));
    CHECK(angular_ks(m) < 0.01);
    const auto rep = fit(m, law);
    CHECK(rep.ks_radial == ks);
    CHECK(rep.sample_count == 100000);
    for (const auto& row : rep.annulus_table) CHECK(std::abs(row.empirical - row.theoretical) < 0.01);
  }
  SUBCASE("sphere measure") {
    const RadialLaw law(limit_measure(SchemeKind::elliptic, 2.0));
    Stream s(SeedSpec{5, 0, 0});
    CHECK(ks_radial(EmpiricalMeasure(sample_law(law, 100000, s)), law) < 0.01);
  }
}

TEST_CASE("ks extremes") {
  const RadialLaw ell(LimitDensity::from_scheme(WeightScheme::elliptic(1.0), 3));
  CHECK(ks_radial(EmpiricalMeasure(std::vector<cplx>(100, cplx{})), ell) == doctest::Approx(1.0));
  const RadialLaw circle(limit_measure(SchemeKind::kac, 1.0));
  std::vector<cplx> on_circle;
  for (int i = 0; i < 64; ++i) on_circle.push_back(std::polar(1.0, 2 * kPi * (i + 0.5) / 64));
  const EmpiricalMeasure m(on_circle);
  CHECK(ks_radial(m, circle) < 1e-12);
  CHECK(angular_ks(m) <= 1.0 / 64 + 1e-12);
}

TEST_CASE("atom at zero is matched") {
  const RadialLaw law(LimitDensity::from_weights(WeightSequence::from_magnitudes(std::vector<double>{0.0, 1.0, 1.0})));
  Stream s(SeedSpec{6, 0, 0});
  const auto x = sample_law(law, 20000, s);
  const EmpiricalMeasure m(x);
  CHECK(std::abs(m.zero_fraction() - 0.5) < 2.0 / std::sqrt(20000.0));
  CHECK(ks_radial(m, law) < 0.02);
}

TEST_CASE("quarter circle fit") {
  CHECK(mp_fit(std::vector<double>(10, 0.0), 1.0) == doctest::Approx(1.0));
  Stream s(SeedSpec{7, 0, 0});
  std::vector<double> v(100000);
  for (double& x : v) x = 3.0 * marchenko_pastur_quantile(s.uniform());
  const double ks = mp_fit(v, 3.0);
  CHECK(ks < 0.01);
  std::vector<double> scaled(v);
  for (double& x : scaled) x /= 3.0;
  CHECK(ks == doctest::Approx(textbook_ks(scaled, marchenko_pastur_cdf)).epsilon(1e-12));
  CHECK_THROWS(mp_fit(std::vector<double>{}, 1.0));
  CHECK_THROWS(mp_fit(std::vector<double>{-1.0}, 1.0));
}

TEST_CASE("annulus mass, tv distance and histogram") {
  const EmpiricalMeasure m({0.5, 1.0, cplx(0, 1.5), 2.0});
  CHECK(mass_in_annulus(m, 1.0, 1.5) == 0.5);
  CHECK(mass_in_annulus(m, 0.0, 10.0) == 1.0);
  CHECK(binned_tv(m, m, 3.0, 8) == 0.0);
  const EmpiricalMeasure far({100.0});
  CHECK(binned_tv(m, far, 3.0, 8) == doctest::Approx(1.0));
  const std::vector<double> edges{0.0, 1.0, 2.0};
  const auto h = radial_histogram(m, edges);
  REQUIRE(h.size() == 2);
  CHECK(h[0].count == 1);
  CHECK(h[1].count == 3);
}
