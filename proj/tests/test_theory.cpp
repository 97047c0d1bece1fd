#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "polyesd/theory.hpp"
#include "support/oracles.hpp"

using namespace polyesd;

namespace {

constexpr double kPi = std::numbers::pi;

WeightSequence seq(const WeightScheme& s, int k) { return WeightSequence::from_scheme(s, k); }

// Truncated-geometric mean: Kac(1) radial CDF, x = r².
double kac1_cdf(int k, double r) {
  const double x = r * r;
  if (std::abs(x - 1.0) < 1e-12) return 0.5;
  const double xk1 = std::pow(x, k + 1);
  return (x / (1.0 - x) - (k + 1) * xk1 / (1.0 - xk1)) / k;
}

// Weyl(c=1) radial CDF by a direct log-space Poisson sum.
double weyl1_cdf(int k, double r) {
  std::vector<double> lw(static_cast<std::size_t>(k) + 1);
  double m = -1e300;
  for (int j = 0; j <= k; ++j) {
    lw[static_cast<std::size_t>(j)] = j * std::log(k * r * r) - std::lgamma(j + 1.0);
    m = std::max(m, lw[static_cast<std::size_t>(j)]);
  }
  double s0 = 0.0, s1 = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double e = std::exp(lw[static_cast<std::size_t>(j)] - m);
    s0 += e;
    s1 += j * e;
  }
  return s1 / s0 / k;
}

double weyl_sup_gap(int k) {
  double worst = 0.0;
  for (int i = 1; i <= 4000; ++i) {
    const double r = i / 4000.0;
    worst = std::max(worst, std::abs(radial_cdf(seq(WeightScheme::weyl(1.0), k), r) - r * r));
  }
  return worst;
}

}  // namespace

TEST_CASE("incomplete gamma") {
  for (double x : {0.0, 0.3, 1.0, 4.0, 30.0}) CHECK(upper_incomplete_gamma(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
  for (double a : {0.5, 1.0, 3.7, 20.0}) CHECK(upper_incomplete_gamma(a, 0.0) == doctest::Approx(std::tgamma(a)).epsilon(1e-12));
  CHECK(upper_incomplete_gamma(3.0, 1.0) == doctest::Approx(5.0 / std::exp(1.0)).epsilon(1e-12));
  for (int n : {1, 4, 9, 15})
    for (double x : {0.2, 2.0, 7.5, 18.0, 40.0})
      CHECK(upper_incomplete_gamma(n + 1.0, x) == doctest::Approx(oracle::integer_upper_gamma(n, x)).epsilon(1e-10));
  CHECK_THROWS_AS(upper_incomplete_gamma(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(upper_incomplete_gamma(1.0, -1.0), std::domain_error);
}

TEST_CASE("log incomplete gamma stays finite where the value does not") {
  const double l = log_upper_incomplete_gamma(2001.0, 2000.0);
  CHECK(std::isfinite(l));
  CHECK(l > 700.0);
  CHECK(std::isfinite(log_upper_incomplete_gamma(5.0, 2000.0)));
  CHECK(log_upper_incomplete_gamma(5.0, 2000.0) < -1900.0);
}

TEST_CASE("general density matches the plain Laplacian expansion") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 2.0), rr(0.0, 2.5);
  for (int t = 0; t < 50; ++t) {
    const int k = 1 + t % 6;
    std::vector<double> a(static_cast<std::size_t>(k) + 1);
    for (double& x : a) x = u(rng);
    const auto w = WeightSequence::from_magnitudes(a);
    const double r = rr(rng);
    CHECK(density_general(w, r) == doctest::Approx(oracle::plain_density(a, r)).epsilon(1e-9));
    CHECK(radial_cdf(w, r) == doctest::Approx(oracle::plain_radial_cdf(a, r)).epsilon(1e-12));
  }
}

TEST_CASE("density examples") {
  for (int k : {1, 2, 5, 11}) CHECK(density_general(seq(WeightScheme::elliptic(1.0), k), 0.0) == doctest::Approx(1.0 / kPi));
  for (double r : {0.0, 0.4, 1.0, 3.0}) {
    const double expect = 1.0 / (kPi * std::pow(1.0 + r * r, 2));
    CHECK(density_general(seq(WeightScheme::kac(1.0), 1), r) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(density_kac(1.0, 1, r) == doctest::Approx(expect).epsilon(1e-12));
  }
  const auto flat = seq(WeightScheme::kac(1.0), 2);
  CHECK(density_general(flat, 1e3) < 1e-6);
  CHECK(LimitDensity::from_weights(flat).integrated_mass() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("density is nonnegative") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 3.0), rr(0.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    const int k = 1 + t % 12;
    std::vector<double> a(static_cast<std::size_t>(k) + 1);
    for (double& x : a) x = u(rng);
    a.back() = 0.5 + u(rng);
    const auto w = WeightSequence::from_magnitudes(a);
    for (int i = 0; i < 200; ++i) CHECK(density_general(w, rr(rng)) >= 0.0);
  }
}

TEST_CASE("radial cdf") {
  const auto w = seq(WeightScheme::kac(1.0), 2);
  CHECK(radial_cdf(w, 0.0) == 0.0);
  CHECK(radial_cdf(w, 1e8) == doctest::Approx(1.0));
  CHECK(radial_cdf(w, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  const double integrated = polar_mass([&](double r) { return density_general(w, r); }, 0.0, 1.0);
  CHECK(integrated == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(radial_cdf(w, -1.0), std::domain_error);
  CHECK_THROWS_AS(radial_cdf(w, std::nan("")), std::domain_error);
}

TEST_CASE("radial cdf with an atom") {
  const auto w = WeightSequence::from_magnitudes(std::vector<double>{0.0, 1.0, 1.0});
  CHECK(radial_cdf(w, 1e9) == doctest::Approx(0.5));
  const auto d = LimitDensity::from_weights(w);
  CHECK(d.atom_mass == doctest::Approx(0.5));
  CHECK(d.cdf(0.0) == doctest::Approx(0.5));
  CHECK(d.cdf_left(0.0) == 0.0);
  CHECK(d.atom_mass + d.integrated_mass() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("kac closed form") {
  CHECK(density_kac(1.0, 1, 0.0) == doctest::Approx(1.0 / kPi));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> rr(0.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    const double c = t % 2 ? 0.5 : 2.0;
    const int k = 1 + t % 9;
    const double r = rr(rng);
    if (std::abs(c * r - 1.0) < kKacCancellationBand) continue;
    CHECK(density_kac(c, k, r) == doctest::Approx(density_general(seq(WeightScheme::kac(c), k), r)).epsilon(1e-6));
  }
  CHECK(density_kac(2.0, 4, cplx(0.3, 0.1)) == doctest::Approx(4.0 * density_kac(1.0, 4, cplx(0.6, 0.2))));
  CHECK(std::isfinite(density_kac(1.0, 3000, 1.0001)));
  CHECK(density_kac(1.0, 5, 1.0) == doctest::Approx(density_general(seq(WeightScheme::kac(1.0), 5), 1.0)));
}

TEST_CASE("weyl closed form") {
  for (double c : {0.5, 1.0, 3.0}) CHECK(density_weyl(c, 7, 0.0) == doctest::Approx(c * c / kPi));
  CHECK(density_general(seq(WeightScheme::weyl(2.0), 7), 0.0) == doctest::Approx(4.0 / kPi));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> rr(0.0, 2.5);
  for (int t = 0; t < 100; ++t) {
    const int k = 1 + t % 20;
    const double r = rr(rng);
    CHECK(density_weyl(1.0, k, r) == doctest::Approx(density_general(seq(WeightScheme::weyl(1.0), k), r)).epsilon(1e-6));
  }
  const double mass = oracle::simpson([](double t) {
    if (t >= 1.0) return 0.0;
    const double r = t / (1.0 - t);
    return 2 * kPi * r * density_weyl(1.0, 5, r) / ((1.0 - t) * (1.0 - t));
  }, 0.0, 1.0, 20000);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
  for (double r : {30.0, 100.0, 1e4})
    CHECK(density_weyl(1.0, 5, r) == doctest::Approx(density_general(seq(WeightScheme::weyl(1.0), 5), r)).epsilon(1e-6));
}

TEST_CASE("elliptic closed form and k independence") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rr(0.0, 4.0);
  for (int t = 0; t < 50; ++t) {
    const double r = rr(rng);
    for (int k : {2, 5, 9})
      CHECK(density_general(seq(WeightScheme::elliptic(1.5), k), r) == doctest::Approx(density_elliptic(1.5, r)).epsilon(1e-8));
  }
}

TEST_CASE("unit mass over schemes") {
  for (double c : {0.5, 1.0, 2.0}) {
    for (const auto& s : {WeightScheme::kac(c), WeightScheme::elliptic(c), WeightScheme::weyl(c), WeightScheme::hyperbolic(c, 2.0)}) {
      const auto d = LimitDensity::from_scheme(s, 4);
      CHECK(d.atom_mass + d.integrated_mass() == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
}

TEST_CASE("cdf derivative matches density") {
  const auto w = seq(WeightScheme::hyperbolic(0.8, 3.0), 6);
  for (double r : {0.1, 0.7, 1.3, 2.9}) {
    const double h = 1e-5;
    const double fd = (radial_cdf(w, r + h) - radial_cdf(w, r - h)) / (2 * h);
    CHECK(fd == doctest::Approx(2 * kPi * r * density_general(w, r)).epsilon(1e-6));
  }
}

TEST_CASE("quantile inverts the cdf") {
  const auto d = LimitDensity::from_scheme(WeightScheme::weyl(1.0), 6);
  for (double u : {0.01, 0.3, 0.5, 0.9, 0.999}) CHECK(d.cdf(d.quantile(u)) == doctest::Approx(u).epsilon(1e-9));
  const auto a = LimitDensity::from_weights(WeightSequence::from_magnitudes(std::vector<double>{0.0, 1.0, 1.0}));
  CHECK(a.quantile(0.25) == 0.0);
  CHECK(a.cdf(a.quantile(0.75)) == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("log variance potential") {
  const auto w = seq(WeightScheme::kac(1.0), 2);
  CHECK(log_variance_potential(w, 3.0) == doctest::Approx(0.25 * std::log(91.0)));
  CHECK(log_variance_potential(w, 0.0) == doctest::Approx(0.0));
  CHECK(std::abs(log_variance_potential(w, 1e6) - std::log(1e6)) < 1e-11);
}

TEST_CASE("limit potentials") {
  CHECK(limit_potential(SchemeKind::kac, 1.0, std::exp(1.0)) == doctest::Approx(0.0));
  CHECK(limit_potential(SchemeKind::kac, 1.0, 0.5) == doctest::Approx(-1.0));
  CHECK(limit_potential(SchemeKind::weyl, 2.0, 0.25) == doctest::Approx(-2.0 + 0.5 * (0.25 - 1.0)));
  CHECK(limit_potential(SchemeKind::weyl, 1.0, 3.0) == doctest::Approx(-1.0 + std::log(3.0)));
  CHECK(limit_potential(SchemeKind::elliptic, 1.0, 2.0) == doctest::Approx(-1.0 + 0.5 * std::log(5.0)));
  CHECK_THROWS_AS(limit_potential(SchemeKind::custom, 1.0, 1.0), InvalidScheme);
}

TEST_CASE("limit measures") {
  const auto disk = limit_measure(SchemeKind::weyl, 2.0);
  for (double r : {0.0, 0.1, 0.3, 0.5}) CHECK(disk.cdf(r) == doctest::Approx(4.0 * r * r));
  CHECK(disk.cdf(3.0) == 1.0);
  const auto circle = limit_measure(SchemeKind::hyperbolic, 0.5);
  CHECK(circle.kind == LimitMeasureKind::uniform_circle);
  CHECK(circle.radius == 2.0);
  CHECK(circle.cdf(2.0) == 1.0);
  CHECK(circle.cdf_left(2.0) == 0.0);
  const auto sphere = limit_measure(SchemeKind::elliptic, 1.0);
  const double m = oracle::simpson([&](double t) {
    const double r = t / (1.0 - t);
    return 2 * kPi * r * sphere.density(r) / ((1.0 - t) * (1.0 - t));
  }, 0.0, 1.0 - 1e-9, 20000);
  CHECK(m == doctest::Approx(1.0).epsilon(1e-6));
  for (double u : {0.1, 0.5, 0.9}) CHECK(sphere.cdf(sphere.quantile(u)) == doctest::Approx(u));
  CHECK_THROWS_AS(limit_measure(SchemeKind::custom, 1.0), InvalidScheme);
}

TEST_CASE("kac annulus mass as k grows") {
  auto mass = [](int k) { return radial_cdf(seq(WeightScheme::kac(1.0), k), 1.1) - radial_cdf(seq(WeightScheme::kac(1.0), k), 0.9); };
  double prev = 0.0;
  for (int k : {20, 80, 200, 500, 1000, 2000}) {
    const double m = mass(k);
    CHECK(m == doctest::Approx(kac1_cdf(k, 1.1) - kac1_cdf(k, 0.9)).epsilon(1e-10));
    CHECK(m > prev);
    prev = m;
  }
  CHECK(mass(200) == doctest::Approx(0.9549).epsilon(1e-4));
  CHECK(mass(500) == doctest::Approx(0.9819).epsilon(1e-4));
  CHECK(mass(1000) == doctest::Approx(0.9910).epsilon(1e-4));
  CHECK(mass(1000) > 0.99);
}

TEST_CASE("weyl radial cdf approaches r^2") {
  for (double r : {0.2, 0.7, 0.99}) CHECK(radial_cdf(seq(WeightScheme::weyl(1.0), 200), r) == doctest::Approx(weyl1_cdf(200, r)).epsilon(1e-10));
  const double g200 = weyl_sup_gap(200), g800 = weyl_sup_gap(800), g2000 = weyl_sup_gap(2000);
  CHECK(g200 == doctest::Approx(0.0543).epsilon(2e-3));
  CHECK(g800 < g200);
  CHECK(g2000 < g800);
  CHECK(g2000 < 0.02);
}

TEST_CASE("radial law wrapper") {
  const RadialLaw circle(limit_measure(SchemeKind::kac, 1.0));
  CHECK(circle.jumps() == std::vector<double>{1.0});
  CHECK(circle.annulus_edges().size() == 7);
  CHECK(circle.describe() == "uniform_circle(radius=1)");
  const RadialLaw atom(LimitDensity::from_weights(WeightSequence::from_magnitudes(std::vector<double>{0.0, 1.0, 1.0})));
  CHECK(atom.jumps() == std::vector<double>{0.0});
  CHECK(atom.atom_mass() == doctest::Approx(0.5));
  const RadialLaw kac(LimitDensity::from_scheme(WeightScheme::kac(1.0), 2));
  CHECK(kac.describe() == "fixed_degree_density(kind=kac, k=2, c=1, atom_mass=0)");
  const auto edges = kac.annulus_edges();
  CHECK(edges.size() == 11);
  CHECK(edges.front() == 0.0);
  CHECK(std::isinf(edges.back()));
  CHECK(edges[5] == doctest::Approx(1.0));
}

TEST_CASE("sample_law is deterministic and lands on the law") {
  const RadialLaw law(limit_measure(SchemeKind::kac, 2.0));
  Stream a(SeedSpec{1, 2, 3}), b(SeedSpec{1, 2, 3});
  const auto x = sample_law(law, 100, a);
  CHECK(x == sample_law(law, 100, b));
  for (cplx z : x) CHECK(std::abs(z) == doctest::Approx(0.5));
}

TEST_CASE("quarter circle law") {
  CHECK(marchenko_pastur_density(0.0) == doctest::Approx(2.0 / kPi));
  CHECK(marchenko_pastur_density(2.5) == 0.0);
  CHECK(marchenko_pastur_cdf(2.0) == doctest::Approx(1.0));
  CHECK(marchenko_pastur_cdf(0.0) == 0.0);
  const double half = oracle::simpson(marchenko_pastur_density, 0.0, 1.0, 2000);
  CHECK(marchenko_pastur_cdf(1.0) == doctest::Approx(half).epsilon(1e-10));
  for (double u : {0.05, 0.5, 0.95}) CHECK(marchenko_pastur_cdf(marchenko_pastur_quantile(u)) == doctest::Approx(u).epsilon(1e-10));
}
