#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "polyesd/theory.hpp"

namespace polyesd {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double LimitMeasure::cdf(double r) const {
  if (r < 0.0) return 0.0;
  const double t = r / radius;
  switch (kind) {
    case LimitMeasureKind::uniform_circle: return t >= 1.0 ? 1.0 : 0.0;
    case LimitMeasureKind::uniform_disk: return std::min(1.0, t * t);
    case LimitMeasureKind::riemann_sphere:
      if (t == kInf) return 1.0;
      return t * t / (1.0 + t * t);
  }
  return 0.0;
}

double LimitMeasure::cdf_left(double r) const {
  if (kind == LimitMeasureKind::uniform_circle) return r > radius ? 1.0 : 0.0;
  return cdf(r);
}

double LimitMeasure::quantile(double u) const {
  if (u <= 0.0) return kind == LimitMeasureKind::uniform_circle ? radius : 0.0;
  switch (kind) {
    case LimitMeasureKind::uniform_circle: return radius;
    case LimitMeasureKind::uniform_disk: return radius * std::sqrt(std::min(u, 1.0));
    case LimitMeasureKind::riemann_sphere:
      if (u >= 1.0) return kInf;
      return radius * std::sqrt(u / (1.0 - u));
  }
  return 0.0;
}

double LimitMeasure::density(cplx z) const {
  const double t2 = std::norm(z) / (radius * radius);
  switch (kind) {
    case LimitMeasureKind::uniform_circle: return 0.0;
    case LimitMeasureKind::uniform_disk: return t2 <= 1.0 ? 1.0 / (kPi * radius * radius) : 0.0;
    case LimitMeasureKind::riemann_sphere: return 1.0 / (kPi * radius * radius * (t2 + 1.0) * (t2 + 1.0));
  }
  return 0.0;
}

std::string_view to_string(LimitMeasureKind kind) {
  switch (kind) {
    case LimitMeasureKind::uniform_circle: return "uniform_circle";
    case LimitMeasureKind::uniform_disk: return "uniform_disk";
    case LimitMeasureKind::riemann_sphere: return "riemann_sphere";
  }
  return "unknown";
}

double limit_potential(SchemeKind kind, double c, cplx z) {
  if (!(c > 0.0)) throw InvalidScheme("scale c must be positive");
  const double cr = c * std::abs(z);
  switch (kind) {
    case SchemeKind::kac:
    case SchemeKind::hyperbolic: return cr > 1.0 ? -c + std::log(cr) : -c;
    case SchemeKind::elliptic: return -c + 0.5 * std::log1p(cr * cr);
    case SchemeKind::weyl: return cr < 1.0 ? -c + 0.5 * (cr * cr - 1.0) : -c + std::log(cr);
    case SchemeKind::custom: break;
  }
  throw InvalidScheme("no closed-form limit potential for custom weights");
}

LimitMeasure limit_measure(SchemeKind kind, double c) {
  if (!(c > 0.0)) throw InvalidScheme("scale c must be positive");
  switch (kind) {
    case SchemeKind::kac:
    case SchemeKind::hyperbolic: return {LimitMeasureKind::uniform_circle, 1.0 / c};
    case SchemeKind::weyl: return {LimitMeasureKind::uniform_disk, 1.0 / c};
    case SchemeKind::elliptic: return {LimitMeasureKind::riemann_sphere, 1.0 / c};
    case SchemeKind::custom: break;
  }
  throw InvalidScheme("no closed-form limit measure for custom weights");
}

double RadialLaw::cdf(double r) const {
  return std::visit([r](const auto& l) { return l.cdf(r); }, law_);
}

double RadialLaw::cdf_left(double r) const {
  return std::visit([r](const auto& l) { return l.cdf_left(r); }, law_);
}

double RadialLaw::quantile(double u) const {
  return std::visit([u](const auto& l) { return l.quantile(u); }, law_);
}

double RadialLaw::atom_mass() const {
  if (const auto* d = std::get_if<LimitDensity>(&law_)) return d->atom_mass;
  return 0.0;
}

std::vector<double> RadialLaw::jumps() const {
  if (const auto* d = std::get_if<LimitDensity>(&law_)) {
    if (d->atom_mass > 0.0) return {0.0};
    return {};
  }
  const auto& m = std::get<LimitMeasure>(law_);
  if (m.kind == LimitMeasureKind::uniform_circle) return {m.radius};
  return {};
}

std::vector<double> RadialLaw::annulus_edges() const {
  if (const auto* m = std::get_if<LimitMeasure>(&law_)) {
    if (m->kind == LimitMeasureKind::uniform_circle) {
      const double r = m->radius;
      return {0.0, 0.9 * r, 0.95 * r, r, 1.05 * r, 1.1 * r, kInf};
    }
  }
  std::vector<double> edges{0.0};
  for (int i = 1; i < 10; ++i) {
    const double q = quantile(i / 10.0);
    if (q > edges.back()) edges.push_back(q);
  }
  edges.push_back(kInf);
  return edges;
}

std::string RadialLaw::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* d = std::get_if<LimitDensity>(&law_)) {
    static constexpr const char* kNames[] = {"generic", "kac", "elliptic", "weyl"};
    os << "fixed_degree_density(kind=" << kNames[static_cast<int>(d->kind)] << ", k=" << d->k
       << ", c=" << d->c << ", atom_mass=" << d->atom_mass << ")";
  } else {
    const auto& m = std::get<LimitMeasure>(law_);
    os << to_string(m.kind) << "(radius=" << m.radius << ")";
  }
  return os.str();
}

std::vector<cplx> sample_law(const RadialLaw& law, std::size_t count, Stream& stream) {
  std::vector<cplx> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = law.quantile(stream.uniform());
    const double theta = 2.0 * kPi * stream.uniform();
    out.push_back(std::polar(r, theta));
  }
  return out;
}

}  // namespace polyesd
