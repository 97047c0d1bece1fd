#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "polyesd/harness.hpp"

using namespace polyesd;

namespace {

std::vector<ExperimentConfig> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.name = "small";
  c.scheme = WeightScheme::kac(1.0);
  c.sizes = {{6, 2}, {10, 2}};
  c.trials = 6;
  c.master_seed = 17;
  c.potential_grid = {2.0, cplx(0, 3)};
  c.histogram_bins = 5;
  return c;
}

std::size_t count_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfgs = parse(
      "[fixed]\nscheme = elliptic\nc = 2\nk = 2, 3\nn = 10, 20\ntrials = 5\nseed = 9\n"
      "distribution = uniform_disk\npotential_grid = 1.5:0, 0:2\n"
      "[growing]\nregime = fixed_or_slow_n_growing_k\nscheme = weyl\nk = 10, 40\n");
  REQUIRE(cfgs.size() == 2);
  const auto& a = cfgs[0];
  CHECK(a.name == "fixed");
  CHECK(a.scheme.kind == SchemeKind::elliptic);
  CHECK(a.scheme.c == 2.0);
  CHECK(a.sizes == std::vector<SizePair>{{10, 2}, {20, 2}, {10, 3}, {20, 3}});
  CHECK(a.trials == 5);
  CHECK(a.master_seed == 9);
  CHECK(a.distributions == std::vector<Distribution>{Distribution::uniform_disk});
  CHECK(a.potential_grid == std::vector<cplx>{1.5, cplx(0, 2)});
  CHECK(cfgs[1].sizes == std::vector<SizePair>{{4, 10}, {4, 40}});
}

TEST_CASE("config power policy") {
  const auto c = parse("[p]\nregime = fixed_or_slow_n_growing_k\nk = 4, 9\nn_policy = power\nn_power = 0.5\n");
  CHECK(c[0].sizes == std::vector<SizePair>{{2, 4}, {3, 9}});
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("[a]\nk = 2\nn = 5\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[a]\nk = 2\nn = five\n"), ConfigError);
  CHECK_THROWS_AS(parse("[a]\nscheme = flat\nk = 2\nn = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[a]\nk = 2\nn = 5\ntrials = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("[a]\nk = 2\nn = 5\ndistribution = cauchy\n"), ConfigError);
  CHECK_THROWS_AS(parse("[a]\nscheme = custom\nk = 2\nn = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[a]\nscheme = custom\nweights = 1, 0\nn = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse("[a]\nk = 2\nn = 5\nn_policy = power\n"), ConfigError);
  CHECK_THROWS_AS(parse("k = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse(""), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/polyesd.ini"), ConfigError);
  try {
    parse("[g]\nregime = fixed_or_slow_n_growing_k\nk = 20\ndistribution = rademacher_pair\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("continuous") != std::string::npos);
  }
}

TEST_CASE("parallel and serial runs are identical") {
  const auto cfg = small_config();
  const auto par = run(cfg, {4, true});
  const auto ser = run_serial(cfg, {0, true});
  CHECK(to_json(par).dump() == to_json(ser).dump());
  CHECK(to_json(run(cfg, {1, false})).dump() == to_json(run(cfg, {3, false})).dump());
  for (std::size_t i = 0; i < par.cells.size(); ++i) CHECK(par.cells[i].eigenvalues == ser.cells[i].eigenvalues);
}

TEST_CASE("run results") {
  const auto res = run(small_config(), {0, true});
  REQUIRE(res.cells.size() == 2);
  const auto& c = res.cells[1];
  CHECK(c.trials == 6);
  CHECK(c.discarded == 0);
  CHECK(c.eigenvalues.size() == 6 * 10 * 2);
  REQUIRE(c.fit);
  CHECK(c.fit->sample_count == 120);
  CHECK(c.potential.size() == 2);
  CHECK(c.histogram.size() == 5);
  std::size_t total = 0;
  for (const auto& b : c.histogram) total += b.count;
  CHECK(total == 120);
  CHECK(c.law == "fixed_degree_density(kind=kac, k=2, c=1, atom_mass=0)");
  CHECK(res.version == version());
}

TEST_CASE("trial labels keep cells apart") {
  CHECK(trial_label(0, 5) == 5);
  CHECK(trial_label(1, 0) == (1ull << 32));
  CHECK(trial_label(1, 0) != trial_label(0, 1));
}

TEST_CASE("cell law by regime") {
  ExperimentConfig c;
  c.scheme = WeightScheme::kac(2.0);
  c.regime = Regime::fixed_or_slow_n_growing_k;
  CHECK(cell_law(c, {4, 50}).describe() == "uniform_circle(radius=0.5)");
  c.regime = Regime::fixed_k_growing_n;
  CHECK(cell_law(c, {4, 3}).describe().rfind("fixed_degree_density", 0) == 0);
}

TEST_CASE("discrete entries can hit a singular leading coefficient") {
  ExperimentConfig c;
  c.name = "disc";
  c.scheme = WeightScheme::kac(1.0);
  c.distributions = {Distribution::two_point_real};
  c.sizes = {{1, 1}, {2, 1}};
  c.trials = 40;
  c.master_seed = 3;
  const auto res = run(c);
  CHECK(res.cells[0].discarded == 0);
  // a random ±1 2x2 matrix is singular with probability 1/2
  CHECK(res.cells[1].discarded > 5);
  CHECK(res.cells[1].discarded < 35);
  CHECK(res.cells[1].discard_notes.size() == static_cast<std::size_t>(res.cells[1].discarded));
  CHECK(res.cells[1].fit->sample_count == static_cast<std::size_t>(2 * (40 - res.cells[1].discarded)));
}

TEST_CASE("json round-trip of the statistics table") {
  const auto res = run(small_config());
  const auto j = nlohmann::json::parse(to_json(res).dump());
  CHECK(stat_rows_from_json(j) == stat_rows(res));
  CHECK_FALSE(j["cells"][0].contains("seconds"));
  CHECK(to_json(res, true)["cells"][0].contains("seconds"));
}

TEST_CASE("csv output") {
  ExperimentConfig empty = small_config();
  empty.sizes.clear();
  std::ostringstream os;
  write_csv(run(empty), os);
  CHECK(os.str() == "experiment,n,k,statistic,value\r\n");

  std::ostringstream full;
  const auto res = run(small_config());
  write_csv(res, full);
  std::size_t lines = 0;
  for (char ch : full.str()) lines += ch == '\n';
  CHECK(lines == stat_rows(res).size() + 1);

  std::ostringstream ev;
  const std::vector<cplx> e{cplx(1, 2), cplx(-0.5, 0)};
  write_eigenvalues_csv(e, ev);
  CHECK(ev.str() == "re,im\r\n1,2\r\n-0.5,0\r\n");
}

TEST_CASE("emit writes dumps") {
  const auto dir = std::filesystem::temp_directory_path() / "polyesd_emit_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto cfg = small_config();
  cfg.dump_eigenvalues = true;
  const auto res = run(cfg, {0, true});
  const std::string base = (dir / "out").string();
  emit(res, base, "json");
  CHECK(std::filesystem::exists(base + ".json"));
  CHECK(count_lines(base + "_n10_k2_eigenvalues.csv") == 1 + 6 * 10 * 2);
  CHECK(count_lines(base + "_n6_k2_histogram.csv") == 1 + 5);
  emit(res, base, "csv");
  CHECK(std::filesystem::exists(base + ".csv"));
  CHECK_THROWS_AS(emit(res, (dir / "missing" / "x").string(), "csv"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("density tabulation parity") {
  const auto law = LimitDensity::from_scheme(WeightScheme::weyl(1.0), 30);
  std::vector<double> r(257);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 0.01 * static_cast<double>(i);
  CHECK(tabulate_density(law, r) == tabulate_density_serial(law, r));
}
