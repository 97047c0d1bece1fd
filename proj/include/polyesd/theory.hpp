#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "polyesd/matpoly.hpp"
#include "polyesd/randgen.hpp"

namespace polyesd {

// ---------------------------------------------------------------------------
// Fixed-degree limit law (n → ∞ with k fixed).
//
// With weights α_0..α_k and p trailing zeros the limit ESD is
//   (p/k) δ_0 + f(z) dz,   f = (1/4πk) Δ ln Σ_{j≥p} |α_j|² |z|^{2(j-p)}.
// Writing e_j ∝ |α_{j+p}|² r^{2j} as a distribution over j, the Laplacian of a
// radial log-sum reduces to
//   f(r) = Var_r(j) / (π k r²),   mass in |z| ≤ r = Mean_r(j) / k,
// which is how both are evaluated: the e_j are formed in log space relative
// to the largest term, and the variance is taken about the mean, so there is
// no overflow at large k and no cancellation near r = 0.
// ---------------------------------------------------------------------------

/// Continuous-part density at |z| = r. Integrates to (k-p)/k.
double density_general(const WeightSequence& w, double r);
inline double density_general(const WeightSequence& w, cplx z) { return density_general(w, std::abs(z)); }

/// Continuous-part mass in the closed disk of radius r; throws std::domain_error for r < 0.
double radial_cdf(const WeightSequence& w, double r);

/// Closed forms for the named schemes.
double density_kac(double c, int k, cplx z);
double density_weyl(double c, int k, cplx z);
/// Elliptic density; independent of k.
double density_elliptic(double c, cplx z);

/// Band around |cz| = 1 where density_kac defers to density_general.
inline constexpr double kKacCancellationBand = 1e-3;
/// density_weyl defers to density_general once k²|cz|⁶ exceeds this; past it
/// 1 − T1 − T2 cancels below single-digit relative accuracy.
inline constexpr double kWeylCancellationLimit = 1e8;

/// Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt.
double upper_incomplete_gamma(double a, double x);
/// ln Γ(a, x), usable where Γ(a, x) itself overflows or underflows.
double log_upper_incomplete_gamma(double a, double x);

/// (1/2k) ln Σ_j |α_j|² |z|^{2j} with |α_k| = 1. For fixed k this is the
/// n → ∞ limit of the empirical log potential; for custom weights it also
/// serves as a finite-k approximation of the k → ∞ potential.
double log_variance_potential(const WeightSequence& w, cplx z);

/// 2π ∫ r f(r) dr over [r_lo, r_hi] by adaptive Gauss-Kronrod.
double polar_mass(const std::function<double(double)>& radial_density, double r_lo, double r_hi,
                  double tol = 1e-13);

enum class DensityKind { generic, kac, elliptic, weyl };

struct LimitDensity {
  WeightSequence weights;
  int k = 1;
  double atom_mass = 0.0;
  DensityKind kind = DensityKind::generic;
  double c = 1.0;

  static LimitDensity from_scheme(const WeightScheme& scheme, int k);
  static LimitDensity from_weights(WeightSequence w);

  /// Uses the closed form when kind allows.
  double density(cplx z) const;
  /// Full CDF including the atom at 0.
  double cdf(double r) const;
  double cdf_left(double r) const { return r <= 0.0 ? 0.0 : cdf(r); }
  double quantile(double u) const;
  /// Continuous-part mass over the whole plane by quadrature.
  double integrated_mass() const;
};

// ---------------------------------------------------------------------------
// Degree-to-infinity limits.
// ---------------------------------------------------------------------------

enum class LimitMeasureKind { uniform_circle, uniform_disk, riemann_sphere };

struct LimitMeasure {
  LimitMeasureKind kind = LimitMeasureKind::uniform_circle;
  double radius = 1.0;  // circle / disk radius, or 1/c for the sphere projection

  double cdf(double r) const;
  double cdf_left(double r) const;
  double quantile(double u) const;
  /// Planar density (zero for the circle, which has none).
  double density(cplx z) const;
};

std::string_view to_string(LimitMeasureKind kind);

/// Closed-form k → ∞ potential for the named schemes, additive constants as
/// printed (−c). Throws InvalidScheme for custom weights.
double limit_potential(SchemeKind kind, double c, cplx z);
LimitMeasure limit_measure(SchemeKind kind, double c);

/// Either law, behind one radial interface for fitting.
class RadialLaw {
 public:
  RadialLaw(LimitDensity d) : law_(std::move(d)) {}  // NOLINT
  RadialLaw(LimitMeasure m) : law_(m) {}             // NOLINT

  double cdf(double r) const;
  double cdf_left(double r) const;
  double quantile(double u) const;
  double atom_mass() const;
  /// Radii where the CDF jumps.
  std::vector<double> jumps() const;
  /// Annulus boundaries for the fit table.
  std::vector<double> annulus_edges() const;
  std::string describe() const;

  const std::variant<LimitDensity, LimitMeasure>& get() const { return law_; }

 private:
  std::variant<LimitDensity, LimitMeasure> law_;
};

/// Inverse-CDF radius with a uniform angle.
std::vector<cplx> sample_law(const RadialLaw& law, std::size_t count, Stream& stream);

// ---------------------------------------------------------------------------
// Quarter-circle law of singular values of X/√n, density √(4−x²)/π on [0, 2].
// ---------------------------------------------------------------------------

double marchenko_pastur_density(double x);
double marchenko_pastur_cdf(double x);
double marchenko_pastur_quantile(double u);

}  // namespace polyesd
