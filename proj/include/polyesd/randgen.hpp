#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "polyesd/linalg.hpp"

namespace polyesd {

/// Entry laws with E[X] = 0 and E|X|² = 1.
enum class Distribution {
  complex_gaussian,  // (g1 + i g2)/√2
  uniform_disk,      // uniform on the disk of radius √2
  uniform_square,    // uniform on [-√(3/2), √(3/2)]²
  rademacher_pair,   // (±1 ± i)/√2
  two_point_real,    // ±1
};

inline constexpr std::array<Distribution, 5> kAllDistributions = {
    Distribution::complex_gaussian, Distribution::uniform_disk, Distribution::uniform_square,
    Distribution::rademacher_pair, Distribution::two_point_real};

/// True for the laws with a bounded continuous density.
constexpr bool is_continuous(Distribution d) {
  return d == Distribution::complex_gaussian || d == Distribution::uniform_disk ||
         d == Distribution::uniform_square;
}

std::string_view to_string(Distribution d);
std::optional<Distribution> parse_distribution(std::string_view name);

/// Stream label. A (master_seed, trial, coefficient) triple always yields the
/// same generator state, whatever thread draws from it.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trial = 0;
  std::uint64_t coefficient = 0;
};

/// 64-bit seed for one substream, from a splitmix64 chain over the labels.
std::uint64_t derive_seed(const SeedSpec& spec);

/// Per-substream generator: mt19937_64 seeded with derive_seed().
class Stream {
 public:
  explicit Stream(const SeedSpec& spec) : engine_(derive_seed(spec)) {}
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

cplx sample_scalar(Distribution dist, Stream& stream);

/// n×n matrix of i.i.d. draws, filled row by row from one stream.
ComplexMatrix sample_matrix(Distribution dist, std::size_t n, Stream& stream);

}  // namespace polyesd
