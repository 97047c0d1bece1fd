#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "polyesd/measure.hpp"

namespace polyesd {

enum class Regime { fixed_k_growing_n, fixed_or_slow_n_growing_k };

std::string_view to_string(Regime r);
std::optional<Regime> parse_regime(std::string_view name);

struct SizePair {
  std::size_t n = 1;
  int k = 1;
  bool operator==(const SizePair&) const = default;
};

/// n(k) rules for the growing-degree regime.
enum class NPolicy { constant, power };

/// Sizes for the growing-degree regime: n = n0 or n = ⌈k^power⌉.
std::vector<SizePair> growing_k_sizes(std::span<const int> ks, NPolicy policy, std::size_t n0,
                                      double power);

struct ExperimentConfig {
  std::string name = "experiment";
  Regime regime = Regime::fixed_k_growing_n;
  WeightScheme scheme;
  /// One kind for every coefficient, or k+1 kinds (then every size shares k).
  std::vector<Distribution> distributions{Distribution::complex_gaussian};
  std::vector<SizePair> sizes;
  int trials = 1;
  std::uint64_t master_seed = 0;
  std::vector<cplx> potential_grid;
  /// Output base path; files are <output>.csv / .json / _eigenvalues.csv / _histogram.csv.
  std::string output;
  bool dump_eigenvalues = false;
  /// Dumps are skipped above this many pooled atoms per cell.
  std::size_t dump_limit = 1'000'000;
  int histogram_bins = 0;

  /// Throws ConfigError; the growing-degree regime only admits continuous kinds.
  void validate() const;
  std::vector<Distribution> distributions_for(int k) const;
};

/// Flat INI text, one section per experiment. Keys:
///   regime, scheme, c, d, weights, k, n, n_policy, n_power, trials, seed,
///   distribution, potential_grid, output, dump_eigenvalues, dump_limit,
///   histogram_bins.
std::vector<ExperimentConfig> parse_config(std::istream& in);
std::vector<ExperimentConfig> load_config(const std::string& path);

struct CellTimings {
  double build = 0.0;
  double eigen = 0.0;
  double fit = 0.0;
};

struct CellResult {
  SizePair size;
  int trials = 0;
  int discarded = 0;
  std::string law;
  std::optional<FitReport> fit;
  double zero_fraction = 0.0;
  double circle_mass = 0.0;  // mass in 0.9/c ≤ |z| ≤ 1.1/c
  std::vector<PotentialRow> potential;
  /// Non-empty when a solver failure aborted the cell.
  std::string diagnostic;
  std::vector<std::string> discard_notes;
  CellTimings timings;
  std::vector<cplx> eigenvalues;  // pooled, kept when dumping or for callers that ask
  std::vector<HistogramBin> histogram;  // radial, when histogram_bins > 0

  double discarded_fraction() const { return trials > 0 ? static_cast<double>(discarded) / trials : 0.0; }
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  std::string version;
};

struct RunOptions {
  int threads = 0;          // 0: OpenMP default
  bool keep_eigenvalues = false;
};

/// Trials run in parallel, one task per trial; aggregation is in trial order
/// so the result does not depend on the thread count.
ExperimentResult run(const ExperimentConfig& config, const RunOptions& opts = {});
/// Single-threaded reference with identical output.
ExperimentResult run_serial(const ExperimentConfig& config, const RunOptions& opts = {});

/// Stream label for trial t of cell c.
constexpr std::uint64_t trial_label(std::size_t cell, int trial) {
  return (static_cast<std::uint64_t>(cell) << 32) | static_cast<std::uint32_t>(trial);
}

/// Law that a cell is fitted against.
RadialLaw cell_law(const ExperimentConfig& config, const SizePair& size);

/// density(|z| = r) over r, parallel and serial variants.
std::vector<double> tabulate_density(const LimitDensity& law, std::span<const double> radii);
std::vector<double> tabulate_density_serial(const LimitDensity& law, std::span<const double> radii);

// Emission.
void write_csv(const ExperimentResult& result, std::ostream& out);
nlohmann::json to_json(const ExperimentResult& result, bool timings = false);
/// Statistics table (experiment, n, k, statistic, value) recovered from JSON.
struct StatRow {
  std::size_t n;
  int k;
  std::string statistic;
  double value;
  bool operator==(const StatRow&) const = default;
};
std::vector<StatRow> stat_rows(const ExperimentResult& result);
std::vector<StatRow> stat_rows_from_json(const nlohmann::json& j);

void write_eigenvalues_csv(std::span<const cplx> eigenvalues, std::ostream& out);
void write_histogram_csv(std::span<const HistogramBin> bins, std::ostream& out);

/// Writes <base>.csv or <base>.json, plus eigenvalue and histogram files when
/// the config asks for them. Throws std::runtime_error on an unwritable path.
void emit(const ExperimentResult& result, const std::string& base, const std::string& format,
          bool timings = false);

std::string_view version();

}  // namespace polyesd
