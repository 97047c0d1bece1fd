#include <algorithm>
#include <chrono>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "polyesd/harness.hpp"

namespace polyesd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

enum class TrialStatus { ok, discarded, failed };

struct TrialOutcome {
  TrialStatus status = TrialStatus::ok;
  std::vector<cplx> eigenvalues;
  std::optional<MatrixPolynomial> poly;
  std::string note;
  double build = 0.0;
  double eigen = 0.0;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, std::size_t cell, int t,
                       const std::vector<Distribution>& dists, bool keep_poly) {
  const SizePair& s = cfg.sizes[cell];
  TrialOutcome out;
  try {
    auto t0 = Clock::now();
    MatrixPolynomial p = build(cfg.scheme, dists, s.n, s.k, cfg.master_seed, trial_label(cell, t));
    out.build = seconds_since(t0);
    t0 = Clock::now();
    out.eigenvalues = eigenvalues_of(p);
    out.eigen = seconds_since(t0);
    if (keep_poly) out.poly.emplace(std::move(p));
  } catch (const SingularLeadingCoefficient& e) {
    out.status = TrialStatus::discarded;
    out.note = "trial " + std::to_string(t) + ": " + e.what();
  } catch (const std::exception& e) {
    out.status = TrialStatus::failed;
    out.note = "trial " + std::to_string(t) + ": " + e.what();
  }
  return out;
}

CellResult run_cell(const ExperimentConfig& cfg, std::size_t cell, bool parallel, const RunOptions& opts) {
  const SizePair& s = cfg.sizes[cell];
  CellResult res;
  res.size = s;
  res.trials = cfg.trials;
  const auto dists = cfg.distributions_for(s.k);
  const bool keep_poly = !cfg.potential_grid.empty();

  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
  if (parallel) {
#ifdef _OPENMP
    const int nt = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#endif
    for (int t = 0; t < cfg.trials; ++t) {
      outcomes[static_cast<std::size_t>(t)] = run_trial(cfg, cell, t, dists, keep_poly);
    }
  } else {
    for (int t = 0; t < cfg.trials; ++t) {
      outcomes[static_cast<std::size_t>(t)] = run_trial(cfg, cell, t, dists, keep_poly);
    }
  }

  std::vector<cplx> pooled;
  std::vector<PotentialSample> samples;
  for (auto& o : outcomes) {
    res.timings.build += o.build;
    res.timings.eigen += o.eigen;
    switch (o.status) {
      case TrialStatus::discarded:
        ++res.discarded;
        res.discard_notes.push_back(o.note);
        break;
      case TrialStatus::failed:
        if (res.diagnostic.empty()) res.diagnostic = o.note;
        break;
      case TrialStatus::ok:
        pooled.insert(pooled.end(), o.eigenvalues.begin(), o.eigenvalues.end());
        if (o.poly) samples.push_back({std::move(*o.poly), std::move(o.eigenvalues)});
        break;
    }
  }
  const RadialLaw law = cell_law(cfg, s);
  res.law = law.describe();
  if (!res.diagnostic.empty()) return res;
  if (pooled.empty()) {
    res.diagnostic = "all trials discarded";
    return res;
  }

  const auto t0 = Clock::now();
  const EmpiricalMeasure m(std::move(pooled));
  res.fit = fit(m, law);
  res.zero_fraction = m.zero_fraction();
  const double c = cfg.scheme.kind == SchemeKind::custom ? 1.0 : cfg.scheme.c;
  res.circle_mass = mass_in_annulus(m, 0.9 / c, 1.1 / c);
  if (!samples.empty()) res.potential = potential_convergence_check(samples, cfg.potential_grid);
  if (cfg.histogram_bins > 0) {
    const double rmax = m.sorted_radii().back();
    std::vector<double> edges(static_cast<std::size_t>(cfg.histogram_bins) + 1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      edges[i] = rmax * static_cast<double>(i) / cfg.histogram_bins;
    }
    if (rmax == 0.0) edges.back() = 1.0;
    res.histogram = radial_histogram(m, edges);
  }
  res.timings.fit = seconds_since(t0);
  if (opts.keep_eigenvalues || (cfg.dump_eigenvalues && m.size() <= cfg.dump_limit)) {
    res.eigenvalues = m.atoms();
  }
  return res;
}

ExperimentResult run_impl(const ExperimentConfig& config, bool parallel, const RunOptions& opts) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.version = std::string(version());
  for (std::size_t c = 0; c < config.sizes.size(); ++c) {
    result.cells.push_back(run_cell(config, c, parallel, opts));
  }
  return result;
}

}  // namespace

RadialLaw cell_law(const ExperimentConfig& config, const SizePair& size) {
  if (config.regime == Regime::fixed_k_growing_n || config.scheme.kind == SchemeKind::custom) {
    return LimitDensity::from_scheme(config.scheme, size.k);
  }
  return limit_measure(config.scheme.kind, config.scheme.c);
}

ExperimentResult run(const ExperimentConfig& config, const RunOptions& opts) {
  return run_impl(config, true, opts);
}

ExperimentResult run_serial(const ExperimentConfig& config, const RunOptions& opts) {
  return run_impl(config, false, opts);
}

std::vector<double> tabulate_density(const LimitDensity& law, std::span<const double> radii) {
  std::vector<double> out(radii.size());
  const auto n = static_cast<std::ptrdiff_t>(radii.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = law.density(radii[static_cast<std::size_t>(i)]);
  return out;
}

std::vector<double> tabulate_density_serial(const LimitDensity& law, std::span<const double> radii) {
  std::vector<double> out(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) out[i] = law.density(radii[i]);
  return out;
}

std::string_view version() { return POLYESD_VERSION; }

}  // namespace polyesd
