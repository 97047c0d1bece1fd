#include "polyesd/randgen.hpp"

#include <cmath>
#include <numbers>

namespace polyesd {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::complex_gaussian: return "complex_gaussian";
    case Distribution::uniform_disk: return "uniform_disk";
    case Distribution::uniform_square: return "uniform_square";
    case Distribution::rademacher_pair: return "rademacher_pair";
    case Distribution::two_point_real: return "two_point_real";
  }
  return "unknown";
}

std::optional<Distribution> parse_distribution(std::string_view name) {
  for (Distribution d : kAllDistributions) {
    if (to_string(d) == name) return d;
  }
  return std::nullopt;
}

std::uint64_t derive_seed(const SeedSpec& spec) {
  std::uint64_t h = splitmix64(spec.master_seed);
  h = splitmix64(h ^ splitmix64(spec.trial + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ splitmix64(spec.coefficient + 0x85157af5ULL));
  return h;
}

cplx sample_scalar(Distribution dist, Stream& stream) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (dist) {
    case Distribution::complex_gaussian: {
      // Box-Muller: modulus² of (g1 + i g2)/√2 is Exp(1)
      const double r = std::sqrt(-std::log(stream.uniform_open0()));
      const double t = two_pi * stream.uniform();
      return std::polar(r, t);
    }
    case Distribution::uniform_disk: {
      const double r = std::sqrt(2.0 * stream.uniform());
      const double t = two_pi * stream.uniform();
      return std::polar(r, t);
    }
    case Distribution::uniform_square: {
      const double h = std::sqrt(1.5);
      const double x = (2.0 * stream.uniform() - 1.0) * h;
      const double y = (2.0 * stream.uniform() - 1.0) * h;
      return {x, y};
    }
    case Distribution::rademacher_pair: {
      const std::uint64_t b = stream.bits();
      const double s = std::numbers::sqrt2 / 2.0;
      return {(b & 1) ? s : -s, (b & 2) ? s : -s};
    }
    case Distribution::two_point_real: {
      return {(stream.bits() & 1) ? 1.0 : -1.0, 0.0};
    }
  }
  return {};
}

ComplexMatrix sample_matrix(Distribution dist, std::size_t n, Stream& stream) {
  if (n == 0) throw DimensionError("sample_matrix needs n >= 1");
  ComplexMatrix m(n, n);
  for (cplx& x : m.entries()) x = sample_scalar(dist, stream);
  return m;
}

}  // namespace polyesd
