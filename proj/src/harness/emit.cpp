#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "polyesd/harness.hpp"

namespace polyesd {

namespace {

using nlohmann::json;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// NaN and ±inf become null in JSON.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double from_number(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json config_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["regime"] = to_string(c.regime);
  j["scheme"] = {{"kind", to_string(c.scheme.kind)}, {"c", c.scheme.c}, {"d", c.scheme.d}};
  if (c.scheme.kind == SchemeKind::custom) j["scheme"]["weights"] = c.scheme.custom;
  j["distributions"] = json::array();
  for (Distribution d : c.distributions) j["distributions"].push_back(to_string(d));
  j["sizes"] = json::array();
  for (const SizePair& s : c.sizes) j["sizes"].push_back({{"n", s.n}, {"k", s.k}});
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["potential_grid"] = json::array();
  for (cplx z : c.potential_grid) j["potential_grid"].push_back({z.real(), z.imag()});
  return j;
}

void add_fit_rows(std::vector<StatRow>& rows, std::size_t n, int k, double ks, double ang, double count,
                  const std::vector<std::pair<double, double>>& annulus) {
  rows.push_back({n, k, "ks_radial", ks});
  rows.push_back({n, k, "angular_ks", ang});
  rows.push_back({n, k, "sample_count", count});
  for (std::size_t i = 0; i < annulus.size(); ++i) {
    rows.push_back({n, k, "annulus_" + std::to_string(i) + "_empirical", annulus[i].first});
    rows.push_back({n, k, "annulus_" + std::to_string(i) + "_theoretical", annulus[i].second});
  }
}

}  // namespace

std::vector<StatRow> stat_rows(const ExperimentResult& result) {
  std::vector<StatRow> rows;
  for (const CellResult& c : result.cells) {
    const auto [n, k] = c.size;
    rows.push_back({n, k, "trials", static_cast<double>(c.trials)});
    rows.push_back({n, k, "discarded", static_cast<double>(c.discarded)});
    rows.push_back({n, k, "discarded_fraction", c.discarded_fraction()});
    if (!c.fit) continue;
    std::vector<std::pair<double, double>> annulus;
    for (const AnnulusRow& a : c.fit->annulus_table) annulus.emplace_back(a.empirical, a.theoretical);
    add_fit_rows(rows, n, k, c.fit->ks_radial, c.fit->angular_ks, static_cast<double>(c.fit->sample_count),
                 annulus);
    rows.push_back({n, k, "zero_fraction", c.zero_fraction});
    rows.push_back({n, k, "circle_mass", c.circle_mass});
    for (std::size_t i = 0; i < c.potential.size(); ++i) {
      const PotentialRow& p = c.potential[i];
      if (p.excluded) continue;
      const std::string pre = "potential_" + std::to_string(i) + "_";
      rows.push_back({n, k, pre + "empirical", p.empirical});
      rows.push_back({n, k, pre + "theoretical", p.theoretical});
      rows.push_back({n, k, pre + "gap", p.gap});
    }
  }
  return rows;
}

std::vector<StatRow> stat_rows_from_json(const json& j) {
  std::vector<StatRow> rows;
  for (const json& c : j.at("cells")) {
    const auto n = c.at("n").get<std::size_t>();
    const int k = c.at("k").get<int>();
    rows.push_back({n, k, "trials", c.at("trials").get<double>()});
    rows.push_back({n, k, "discarded", c.at("discarded").get<double>()});
    rows.push_back({n, k, "discarded_fraction", c.at("discarded_fraction").get<double>()});
    if (!c.contains("fit")) continue;
    const json& f = c.at("fit");
    std::vector<std::pair<double, double>> annulus;
    for (const json& a : f.at("annulus_table")) {
      annulus.emplace_back(a.at("empirical").get<double>(), a.at("theoretical").get<double>());
    }
    add_fit_rows(rows, n, k, f.at("ks_radial").get<double>(), f.at("angular_ks").get<double>(),
                 f.at("sample_count").get<double>(), annulus);
    rows.push_back({n, k, "zero_fraction", c.at("zero_fraction").get<double>()});
    rows.push_back({n, k, "circle_mass", c.at("circle_mass").get<double>()});
    const json& pot = c.at("potential");
    for (std::size_t i = 0; i < pot.size(); ++i) {
      if (pot[i].at("excluded").get<bool>()) continue;
      const std::string pre = "potential_" + std::to_string(i) + "_";
      rows.push_back({n, k, pre + "empirical", from_number(pot[i].at("empirical"))});
      rows.push_back({n, k, pre + "theoretical", from_number(pot[i].at("theoretical"))});
      rows.push_back({n, k, pre + "gap", from_number(pot[i].at("gap"))});
    }
  }
  return rows;
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << "experiment,n,k,statistic,value\r\n";
  const auto old = out.precision(17);
  const std::string name = csv_field(result.config.name);
  for (const StatRow& r : stat_rows(result)) {
    out << name << ',' << r.n << ',' << r.k << ',' << r.statistic << ',' << r.value << "\r\n";
  }
  out.precision(old);
}

json to_json(const ExperimentResult& result, bool timings) {
  json j;
  j["version"] = result.version;
  j["config"] = config_json(result.config);
  j["cells"] = json::array();
  for (const CellResult& c : result.cells) {
    json cj;
    cj["n"] = c.size.n;
    cj["k"] = c.size.k;
    cj["trials"] = c.trials;
    cj["discarded"] = c.discarded;
    cj["discarded_fraction"] = c.discarded_fraction();
    cj["discard_notes"] = c.discard_notes;
    cj["law"] = c.law;
    cj["diagnostic"] = c.diagnostic;
    if (c.fit) {
      json f;
      f["ks_radial"] = c.fit->ks_radial;
      f["angular_ks"] = c.fit->angular_ks;
      f["sample_count"] = c.fit->sample_count;
      f["annulus_table"] = json::array();
      for (const AnnulusRow& a : c.fit->annulus_table) {
        f["annulus_table"].push_back(
            {{"r_lo", number(a.r_lo)}, {"r_hi", number(a.r_hi)}, {"empirical", a.empirical}, {"theoretical", a.theoretical}});
      }
      cj["fit"] = f;
      cj["zero_fraction"] = c.zero_fraction;
      cj["circle_mass"] = c.circle_mass;
    }
    cj["potential"] = json::array();
    for (const PotentialRow& p : c.potential) {
      cj["potential"].push_back({{"re", p.z.real()},
                                 {"im", p.z.imag()},
                                 {"empirical", number(p.empirical)},
                                 {"theoretical", number(p.theoretical)},
                                 {"gap", number(p.gap)},
                                 {"det_route", number(p.det_route)},
                                 {"excluded", p.excluded}});
    }
    if (timings) {
      cj["seconds"] = {{"build", c.timings.build}, {"eigen", c.timings.eigen}, {"fit", c.timings.fit}};
    }
    j["cells"].push_back(cj);
  }
  return j;
}

void write_eigenvalues_csv(std::span<const cplx> eigenvalues, std::ostream& out) {
  const auto old = out.precision(17);
  out << "re,im\r\n";
  for (const cplx& z : eigenvalues) out << z.real() << ',' << z.imag() << "\r\n";
  out.precision(old);
}

void write_histogram_csv(std::span<const HistogramBin> bins, std::ostream& out) {
  const auto old = out.precision(17);
  out << "bin_lo,bin_hi,count\r\n";
  for (const HistogramBin& b : bins) out << b.lo << ',' << b.hi << ',' << b.count << "\r\n";
  out.precision(old);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  return f;
}

void check(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace

void emit(const ExperimentResult& result, const std::string& base, const std::string& format,
          bool timings) {
  if (format == "csv") {
    const std::string path = base + ".csv";
    auto f = open_out(path);
    write_csv(result, f);
    check(f, path);
  } else if (format == "json") {
    const std::string path = base + ".json";
    auto f = open_out(path);
    f << to_json(result, timings).dump(2) << '\n';
    check(f, path);
  } else {
    throw std::invalid_argument("unknown format '" + format + "' (csv or json)");
  }
  for (const CellResult& c : result.cells) {
    const std::string tag = "_n" + std::to_string(c.size.n) + "_k" + std::to_string(c.size.k);
    if (result.config.dump_eigenvalues && !c.eigenvalues.empty()) {
      const std::string path = base + tag + "_eigenvalues.csv";
      auto f = open_out(path);
      write_eigenvalues_csv(c.eigenvalues, f);
      check(f, path);
    }
    if (!c.histogram.empty()) {
      const std::string path = base + tag + "_histogram.csv";
      auto f = open_out(path);
      write_histogram_csv(c.histogram, f);
      check(f, path);
    }
  }
}

}  // namespace polyesd
