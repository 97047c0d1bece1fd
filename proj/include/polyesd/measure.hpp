#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "polyesd/matpoly.hpp"
#include "polyesd/theory.hpp"

namespace polyesd {

/// Atoms closer than this to the origin count as exact zeros.
inline constexpr double kZeroAtomRadius = 1e-10;
/// Grid points this close to a pooled eigenvalue are excluded from potential tables.
inline constexpr double kExclusionRadius = 1e-6;

/// Uniform atomic probability measure.
class EmpiricalMeasure {
 public:
  /// Throws DimensionError on an empty list and NonFiniteError on a non-finite atom.
  explicit EmpiricalMeasure(std::vector<cplx> atoms);
  static EmpiricalMeasure from_reals(std::span<const double> values);

  std::size_t size() const { return atoms_.size(); }
  double atom_weight() const { return 1.0 / static_cast<double>(atoms_.size()); }
  const std::vector<cplx>& atoms() const { return atoms_; }
  /// Moduli in ascending order, with near-zero atoms snapped to 0.
  const std::vector<double>& sorted_radii() const { return radii_; }

  /// Mass of the closed disk of radius r.
  double radial_cdf(double r) const;
  /// Fraction of atoms with modulus below kZeroAtomRadius.
  double zero_fraction() const;
  /// ∫ ln|z − w| dμ(w); −inf if z is an atom.
  double log_potential(cplx z) const;

 private:
  std::vector<cplx> atoms_;
  std::vector<double> radii_;
};

EmpiricalMeasure esd(std::vector<cplx> eigenvalues);
/// Pooled ESD of several trials (equal-size trials give the mixture of ESDs).
EmpiricalMeasure esd(std::span<const std::vector<cplx>> trials);

/// (1/nk) ln|det P(z)|.
double empirical_log_potential(const MatrixPolynomial& p, cplx z);
/// (1/nk) Σ ln σ_i(P(z)).
double singular_value_log_potential(const MatrixPolynomial& p, cplx z);
/// (1/nk) [ln|det C_k| + Σ ln|z − λ_i|] over the given eigenvalues.
double eigenvalue_log_potential(const MatrixPolynomial& p, std::span<const cplx> eigenvalues, cplx z);

/// One polynomial of an ensemble with its spectrum.
struct PotentialSample {
  MatrixPolynomial poly;
  std::vector<cplx> eigenvalues;
};

struct PotentialRow {
  cplx z;
  double empirical = 0.0;    // ensemble mean of the ESD potential, from the atoms
  double theoretical = 0.0;  // (1/2k) ln Σ |α_j|² |z|^{2j}
  double gap = 0.0;          // |empirical − theoretical|
  double det_route = 0.0;    // same mean through ln|det P(z)| − ln|det C_k|
  bool excluded = false;     // z near a pooled eigenvalue; values are NaN
};

/// ESD log potential of the ensemble against the fixed-degree limit on a
/// grid. All samples must share the weight sequence.
std::vector<PotentialRow> potential_convergence_check(std::span<const PotentialSample> ensemble,
                                                      std::span<const cplx> grid,
                                                      double exclusion_radius = kExclusionRadius);

struct AnnulusRow {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double empirical = 0.0;
  double theoretical = 0.0;
};

struct FitReport {
  double ks_radial = 0.0;
  double angular_ks = 0.0;
  std::vector<AnnulusRow> annulus_table;
  std::size_t sample_count = 0;
};

/// Radial and angular Kolmogorov-Smirnov distances plus an annulus table
/// over the law's annulus edges (bins are [r_lo, r_hi)).
FitReport fit(const EmpiricalMeasure& measure, const RadialLaw& law);

/// Sup distance between the empirical radial CDF and the law's CDF.
double ks_radial(const EmpiricalMeasure& measure, const RadialLaw& law);
/// KS distance of the arguments of nonzero atoms against uniform on [0, 2π).
double angular_ks(const EmpiricalMeasure& measure);

/// KS distance of values/scale against the quarter-circle law on [0, 2].
double mp_fit(std::span<const double> values, double scale);

/// Mass of the closed annulus r_lo ≤ |z| ≤ r_hi.
double mass_in_annulus(const EmpiricalMeasure& measure, double r_lo, double r_hi);

/// Total variation between two measures binned on a bins×bins grid over
/// [−extent, extent]², with everything outside pooled into one extra bin.
double binned_tv(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double extent, int bins);

struct HistogramBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

/// Counts of |z| in [edges[i], edges[i+1]); the last bin is closed.
std::vector<HistogramBin> radial_histogram(const EmpiricalMeasure& measure, std::span<const double> edges);

}  // namespace polyesd
