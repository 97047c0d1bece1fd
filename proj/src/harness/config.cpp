#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "polyesd/harness.hpp"

namespace polyesd {

namespace {

namespace pt = boost::property_tree;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "regime", "scheme", "c", "d", "weights", "k", "n", "n_policy", "n_power", "trials", "seed",
      "distribution", "potential_grid", "output", "dump_eigenvalues", "dump_limit", "histogram_bins"};
  return keys;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& section, const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v{};
  is >> v;
  if (is.fail() || !is.eof()) {
    throw ConfigError("[" + section + "] " + key + ": cannot parse '" + text + "'");
  }
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& section, const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const auto& item : split(text)) out.push_back(parse_number<T>(section, key, item));
  return out;
}

bool parse_bool(const std::string& section, const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("[" + section + "] " + key + ": expected true/false, got '" + text + "'");
}

// re:im pairs, e.g. "1.5:0, 0:2"
std::vector<cplx> parse_grid(const std::string& section, const std::string& text) {
  std::vector<cplx> out;
  for (const auto& item : split(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      out.emplace_back(parse_number<double>(section, "potential_grid", item), 0.0);
    } else {
      out.emplace_back(parse_number<double>(section, "potential_grid", trim(item.substr(0, colon))),
                       parse_number<double>(section, "potential_grid", trim(item.substr(colon + 1))));
    }
  }
  return out;
}

ExperimentConfig parse_section(const std::string& name, const pt::ptree& tree) {
  for (const auto& [key, _] : tree) {
    if (!known_keys().contains(key)) throw ConfigError("[" + name + "] unknown key '" + key + "'");
  }
  auto get = [&](const std::string& key) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(key)) return trim(*v);
    return std::nullopt;
  };

  ExperimentConfig cfg;
  cfg.name = name;
  if (auto v = get("regime")) {
    auto r = parse_regime(*v);
    if (!r) throw ConfigError("[" + name + "] unknown regime '" + *v + "'");
    cfg.regime = *r;
  }
  const std::string scheme = get("scheme").value_or("kac");
  const auto kind = parse_scheme_kind(scheme);
  if (!kind) throw ConfigError("[" + name + "] unknown scheme '" + scheme + "'");
  cfg.scheme.kind = *kind;
  if (auto v = get("c")) cfg.scheme.c = parse_number<double>(name, "c", *v);
  if (auto v = get("d")) cfg.scheme.d = parse_number<double>(name, "d", *v);
  if (auto v = get("weights")) cfg.scheme.custom = parse_list<double>(name, "weights", *v);
  if (cfg.scheme.kind == SchemeKind::custom && cfg.scheme.custom.empty()) {
    throw ConfigError("[" + name + "] scheme custom needs 'weights'");
  }

  auto ks = parse_list<int>(name, "k", get("k").value_or(""));
  if (ks.empty() && cfg.scheme.kind == SchemeKind::custom) {
    ks.push_back(static_cast<int>(cfg.scheme.custom.size()) - 1);
  }
  const std::string policy = get("n_policy").value_or("constant");
  if (policy != "constant" && policy != "power") {
    throw ConfigError("[" + name + "] n_policy must be constant or power");
  }
  if (policy == "power") {
    if (cfg.regime != Regime::fixed_or_slow_n_growing_k) {
      throw ConfigError("[" + name + "] n_policy = power only applies to the growing-degree regime");
    }
    const double power = parse_number<double>(name, "n_power", get("n_power").value_or("1"));
    cfg.sizes = growing_k_sizes(ks, NPolicy::power, 0, power);
  } else {
    const std::string ndefault = cfg.regime == Regime::fixed_or_slow_n_growing_k ? "4" : "";
    const auto ns = parse_list<long long>(name, "n", get("n").value_or(ndefault));
    for (int k : ks) {
      for (long long n : ns) {
        if (n < 1 || k < 1) throw ConfigError("[" + name + "] n and k must be >= 1");
        cfg.sizes.push_back({static_cast<std::size_t>(n), k});
      }
    }
  }

  if (auto v = get("trials")) cfg.trials = parse_number<int>(name, "trials", *v);
  if (auto v = get("seed")) cfg.master_seed = parse_number<std::uint64_t>(name, "seed", *v);
  if (auto v = get("distribution")) {
    cfg.distributions.clear();
    for (const auto& item : split(*v)) {
      auto d = parse_distribution(item);
      if (!d) throw ConfigError("[" + name + "] unknown distribution '" + item + "'");
      cfg.distributions.push_back(*d);
    }
  }
  if (auto v = get("potential_grid")) cfg.potential_grid = parse_grid(name, *v);
  if (auto v = get("output")) cfg.output = *v;
  if (auto v = get("dump_eigenvalues")) cfg.dump_eigenvalues = parse_bool(name, "dump_eigenvalues", *v);
  if (auto v = get("dump_limit")) cfg.dump_limit = parse_number<std::size_t>(name, "dump_limit", *v);
  if (auto v = get("histogram_bins")) cfg.histogram_bins = parse_number<int>(name, "histogram_bins", *v);
  cfg.validate();
  return cfg;
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::fixed_k_growing_n: return "fixed_k_growing_n";
    case Regime::fixed_or_slow_n_growing_k: return "fixed_or_slow_n_growing_k";
  }
  return "unknown";
}

std::optional<Regime> parse_regime(std::string_view name) {
  for (Regime r : {Regime::fixed_k_growing_n, Regime::fixed_or_slow_n_growing_k}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

std::vector<SizePair> growing_k_sizes(std::span<const int> ks, NPolicy policy, std::size_t n0,
                                      double power) {
  std::vector<SizePair> out;
  for (int k : ks) {
    if (k < 1) throw ConfigError("k must be >= 1");
    std::size_t n = n0;
    if (policy == NPolicy::power) {
      if (!(power >= 0.0)) throw ConfigError("n_power must be >= 0");
      n = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(k), power)));
    }
    if (n < 1) throw ConfigError("n must be >= 1");
    out.push_back({n, k});
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError(name + ": trials must be >= 1");
  if (distributions.empty()) throw ConfigError(name + ": no distribution given");
  for (const SizePair& s : sizes) {
    if (s.n < 1 || s.k < 1) throw ConfigError(name + ": n and k must be >= 1");
    if (distributions.size() != 1 && distributions.size() != static_cast<std::size_t>(s.k) + 1) {
      throw ConfigError(name + ": " + std::to_string(distributions.size()) +
                        " distributions given, need 1 or k+1 = " + std::to_string(s.k + 1));
    }
    try {
      (void)WeightSequence::from_scheme(scheme, s.k);
    } catch (const InvalidScheme& e) {
      throw ConfigError(name + ": " + e.what());
    }
  }
  if (regime == Regime::fixed_or_slow_n_growing_k) {
    for (Distribution d : distributions) {
      if (!is_continuous(d)) {
        throw ConfigError(name + ": distribution '" + std::string(to_string(d)) +
                          "' is discrete; the growing-degree regime needs continuous coefficient "
                          "distributions with uniformly bounded densities (complex_gaussian, "
                          "uniform_disk, uniform_square)");
      }
    }
  }
}

std::vector<Distribution> ExperimentConfig::distributions_for(int k) const {
  if (distributions.size() == 1) return std::vector<Distribution>(static_cast<std::size_t>(k) + 1, distributions.front());
  return distributions;
}

std::vector<ExperimentConfig> parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  std::vector<ExperimentConfig> out;
  for (const auto& [name, section] : tree) {
    if (section.empty()) throw ConfigError("key '" + name + "' outside any [section]");
    out.push_back(parse_section(name, section));
  }
  if (out.empty()) throw ConfigError("config has no [section]");
  return out;
}

std::vector<ExperimentConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in);
}

}  // namespace polyesd
