// polyesd: spectra of random matrix polynomials against their limit laws.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>

#include "CLI11.hpp"
#include "polyesd/harness.hpp"
#include "polyesd/validate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace polyesd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string format = "csv";
  bool timings = false;
};

struct SchemeArgs {
  std::string scheme = "kac";
  double c = 1.0;
  double d = 1.0;
  std::vector<double> weights;
  int k = 2;

  WeightScheme get() const {
    auto kind = parse_scheme_kind(scheme);
    if (!kind) throw ConfigError("unknown scheme '" + scheme + "'");
    if (*kind == SchemeKind::custom) {
      if (weights.empty()) throw ConfigError("--scheme custom needs --weights");
      return WeightScheme::from_values(weights);
    }
    return WeightScheme{*kind, c, d, {}};
  }
  int degree() const { return parse_scheme_kind(scheme) == SchemeKind::custom ? static_cast<int>(weights.size()) - 1 : k; }
};

void add_scheme_options(CLI::App* app, SchemeArgs& s) {
  app->add_option("--scheme", s.scheme, "kac, elliptic, weyl, hyperbolic or custom")->capture_default_str();
  app->add_option("--c", s.c, "scale c > 0")->capture_default_str();
  app->add_option("--d", s.d, "hyperbolic parameter d > 0")->capture_default_str();
  app->add_option("--weights", s.weights, "custom |alpha_0| ... |alpha_k|")->delimiter(',');
  app->add_option("--k", s.k, "degree")->capture_default_str();
}

// Table output to a file or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int cmd_density(const Common& g, const SchemeArgs& s, double r_max, int points, bool limit) {
  const WeightScheme scheme = s.get();
  const int k = s.degree();
  std::vector<double> r(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) r[static_cast<std::size_t>(i)] = points == 1 ? 0.0 : r_max * i / (points - 1);

  std::vector<double> dens, cdf;
  if (limit) {
    const LimitMeasure m = limit_measure(scheme.kind, scheme.c);
    for (double x : r) {
      dens.push_back(m.density(x));
      cdf.push_back(m.cdf(x));
    }
  } else {
    const LimitDensity d = LimitDensity::from_scheme(scheme, k);
    dens = tabulate_density(d, r);
    for (double x : r) cdf.push_back(d.cdf(x));
  }

  Sink sink(g.out);
  std::ostream& os = sink.get();
  if (g.format == "json") {
    nlohmann::json j;
    j["scheme"] = to_string(scheme.kind);
    j["k"] = k;
    j["limit"] = limit;
    j["r"] = r;
    j["density"] = dens;
    j["cdf"] = cdf;
    os << j.dump(2) << '\n';
  } else {
    os.precision(17);
    os << "r,density,cdf\r\n";
    for (std::size_t i = 0; i < r.size(); ++i) os << r[i] << ',' << dens[i] << ',' << cdf[i] << "\r\n";
  }
  return kExitOk;
}

int cmd_sample(const Common& g, const SchemeArgs& s, std::size_t n, const std::string& dist_name,
               std::uint64_t trial) {
  const auto dist = parse_distribution(dist_name);
  if (!dist) throw ConfigError("unknown distribution '" + dist_name + "'");
  const auto p = build(s.get(), *dist, n, s.degree(), g.seed, trial);
  const auto eig = eigenvalues_of(p);
  Sink sink(g.out);
  write_eigenvalues_csv(eig, sink.get());
  return kExitOk;
}

int cmd_experiment(const Common& g, const std::string& config_path, bool seed_given) {
  const auto configs = load_config(config_path);
  for (auto cfg : configs) {
    if (seed_given) cfg.master_seed = g.seed;
    std::string base = g.out.empty() ? (cfg.output.empty() ? cfg.name : cfg.output) : g.out;
    if (!g.out.empty() && configs.size() > 1) base += "_" + cfg.name;
    const ExperimentResult res = run(cfg, RunOptions{g.threads, false});
    for (const CellResult& c : res.cells) {
      std::cerr << cfg.name << " n=" << c.size.n << " k=" << c.size.k << ": ";
      if (!c.diagnostic.empty()) {
        std::cerr << "aborted (" << c.diagnostic << ")\n";
      } else {
        std::cerr << "ks_radial=" << c.fit->ks_radial << " angular_ks=" << c.fit->angular_ks
                  << " discarded=" << c.discarded << "/" << c.trials << '\n';
      }
    }
    emit(res, base, g.format, g.timings);
  }
  return kExitOk;
}

int cmd_potential(const Common& g, const SchemeArgs& s, const std::vector<std::size_t>& ns, int trials,
                  const std::string& dist_name, const std::vector<double>& radii, int angles) {
  const auto dist = parse_distribution(dist_name);
  if (!dist) throw ConfigError("unknown distribution '" + dist_name + "'");
  if (trials < 1 || angles < 1) throw ConfigError("--trials and --angles must be >= 1");
  std::vector<cplx> grid;
  for (double r : radii) {
    for (int a = 0; a < angles; ++a) grid.push_back(std::polar(r, 2.0 * std::numbers::pi * (a + 0.5) / angles));
  }
  ExperimentConfig cfg;
  cfg.name = "potential";
  cfg.scheme = s.get();
  cfg.distributions = {*dist};
  for (std::size_t n : ns) cfg.sizes.push_back({n, s.degree()});
  cfg.trials = trials;
  cfg.master_seed = g.seed;
  cfg.potential_grid = grid;
  const ExperimentResult res = run(cfg, RunOptions{g.threads, false});

  Sink sink(g.out);
  std::ostream& os = sink.get();
  if (g.format == "json") {
    os << to_json(res, g.timings).dump(2) << '\n';
    return kExitOk;
  }
  os.precision(17);
  os << "n,k,re,im,empirical,theoretical,gap,det_route,excluded\r\n";
  for (const CellResult& c : res.cells) {
    for (const PotentialRow& p : c.potential) {
      os << c.size.n << ',' << c.size.k << ',' << p.z.real() << ',' << p.z.imag() << ',' << p.empirical << ','
         << p.theoretical << ',' << p.gap << ',' << p.det_route << ',' << (p.excluded ? 1 : 0) << "\r\n";
    }
  }
  return kExitOk;
}

int cmd_validate(const Common& g) {
  bool ok = true;
  for (const CheckResult& r : run_validation(g.seed)) {
    std::cout << (r.passed ? "ok    " : "FAILED") << "  " << r.name << "  (" << r.detail << ")\n";
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random matrix polynomial spectra and their limit laws"};
  app.require_subcommand(1);
  app.fallthrough();

  Common g;
  if (const char* env = std::getenv("POLYESD_THREADS")) {
    try {
      g.threads = std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring POLYESD_THREADS='" << env << "'\n";
    }
  }
  auto* seed_opt = app.add_option("--seed", g.seed, "master seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (default: POLYESD_THREADS or all cores)");
  app.add_option("--out", g.out, "output path or base name (default: stdout or config output)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_flag("--timings", g.timings, "include wall-clock seconds in JSON");

  SchemeArgs s;
  auto* density = app.add_subcommand("density", "tabulate a limit density and its radial CDF");
  add_scheme_options(density, s);
  double r_max = 3.0;
  int points = 61;
  bool limit = false;
  density->add_option("--r-max", r_max, "largest radius")->capture_default_str();
  density->add_option("--points", points, "number of radii")->check(CLI::PositiveNumber)->capture_default_str();
  density->add_flag("--limit", limit, "tabulate the degree-to-infinity measure instead");

  auto* sample = app.add_subcommand("sample", "eigenvalues of one random polynomial as re,im CSV");
  add_scheme_options(sample, s);
  std::size_t n = 10;
  std::string dist = "complex_gaussian";
  std::uint64_t trial = 0;
  sample->add_option("--n", n, "matrix size")->check(CLI::PositiveNumber)->capture_default_str();
  sample->add_option("--distribution", dist, "entry law")->capture_default_str();
  sample->add_option("--trial", trial, "trial label")->capture_default_str();

  auto* experiment = app.add_subcommand("experiment", "run every section of a config file");
  std::string config_path;
  experiment->add_option("config", config_path, "config file")->required();

  auto* potential = app.add_subcommand("potential", "empirical vs limit log potential tables");
  add_scheme_options(potential, s);
  std::vector<std::size_t> ns{50, 300};
  int trials = 10;
  std::vector<double> radii{1.5, 2.0, 2.5, 3.0, 4.0};
  int angles = 2;
  potential->add_option("--n", ns, "matrix sizes")->delimiter(',')->capture_default_str();
  potential->add_option("--trials", trials, "polynomials per size")->capture_default_str();
  potential->add_option("--distribution", dist, "entry law")->capture_default_str();
  potential->add_option("--radii", radii, "grid radii")->delimiter(',')->capture_default_str();
  potential->add_option("--angles", angles, "grid points per radius")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "run the built-in invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  apply_threads(g.threads);
  try {
    if (*density) return cmd_density(g, s, r_max, points, limit);
    if (*sample) return cmd_sample(g, s, n, dist, trial);
    if (*experiment) return cmd_experiment(g, config_path, seed_opt->count() > 0);
    if (*potential) return cmd_potential(g, s, ns, trials, dist, radii, angles);
    if (*validate) return cmd_validate(g);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidScheme& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
