#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyesd/linalg.hpp"
#include "polyesd/randgen.hpp"

namespace polyesd {

enum class SchemeKind { kac, elliptic, weyl, hyperbolic, custom };

std::string_view to_string(SchemeKind kind);
std::optional<SchemeKind> parse_scheme_kind(std::string_view name);

/// Rule for the coefficient scales |α_j|. Phases are taken real nonnegative.
struct WeightScheme {
  SchemeKind kind = SchemeKind::kac;
  double c = 1.0;
  double d = 1.0;              // hyperbolic only
  std::vector<double> custom;  // custom only, length k+1

  static WeightScheme kac(double c) { return {SchemeKind::kac, c, 1.0, {}}; }
  static WeightScheme elliptic(double c) { return {SchemeKind::elliptic, c, 1.0, {}}; }
  static WeightScheme weyl(double c) { return {SchemeKind::weyl, c, 1.0, {}}; }
  static WeightScheme hyperbolic(double c, double d) { return {SchemeKind::hyperbolic, c, d, {}}; }
  static WeightScheme from_values(std::vector<double> w) {
    return {SchemeKind::custom, 1.0, 1.0, std::move(w)};
  }
};

/// |α_0|, …, |α_k| held as natural logs (−inf for an exact zero), normalized
/// so that log|α_k| = 0. Log storage keeps schemes like Weyl at k in the
/// thousands representable.
class WeightSequence {
 public:
  WeightSequence() = default;
  static WeightSequence from_log(std::vector<double> log_abs);
  static WeightSequence from_magnitudes(std::span<const double> magnitudes);
  static WeightSequence from_scheme(const WeightScheme& scheme, int k);

  int degree() const { return static_cast<int>(log_.size()) - 1; }
  /// Smallest index with a nonzero weight.
  int trailing_zeros() const { return p_; }
  std::span<const double> log_abs() const { return log_; }
  double log_abs(int j) const { return log_[static_cast<std::size_t>(j)]; }
  /// exp(log|α_j|); may underflow to 0 for extreme schemes.
  std::vector<double> magnitudes() const;
  /// Weights p..k re-indexed from 0 (α_0 ≠ 0 afterwards).
  WeightSequence shifted() const;

  bool operator==(const WeightSequence&) const = default;

 private:
  std::vector<double> log_;
  int p_ = 0;
};

/// |α_j| for j = 0..k with |α_k| = 1.
std::vector<double> weights(const WeightScheme& scheme, int k);

/// P(z) = Σ_j (α_j C_j) z^j with the products stored pre-multiplied.
class MatrixPolynomial {
 public:
  /// Explicit coefficients; weights are 1 for nonzero matrices, 0 otherwise.
  static MatrixPolynomial from_coefficients(std::vector<ComplexMatrix> coeffs);
  MatrixPolynomial(std::vector<ComplexMatrix> weighted_coeffs, WeightSequence weights);

  std::size_t size() const { return n_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  int trailing_zeros() const { return weights_.trailing_zeros(); }
  const WeightSequence& weights() const { return weights_; }
  const std::vector<ComplexMatrix>& coefficients() const { return coeffs_; }
  const ComplexMatrix& coefficient(int j) const { return coeffs_[static_cast<std::size_t>(j)]; }

  /// Q(z) = P(z)/z^p.
  MatrixPolynomial shifted() const;
  MatrixPolynomial scaled(cplx s) const;

 private:
  std::size_t n_ = 0;
  std::vector<ComplexMatrix> coeffs_;
  WeightSequence weights_;
};

/// Random polynomial with coefficient j drawn from substream (seed, trial, j).
MatrixPolynomial build(const WeightScheme& scheme, std::span<const Distribution> dists,
                       std::size_t n, int k, std::uint64_t master_seed, std::uint64_t trial = 0);
MatrixPolynomial build(const WeightScheme& scheme, Distribution dist, std::size_t n, int k,
                       std::uint64_t master_seed, std::uint64_t trial = 0);

ComplexMatrix evaluate(const MatrixPolynomial& p, cplx z);

/// Relative invertibility threshold on the leading coefficient (1/κ₂).
inline constexpr double kLeadingRcondThreshold = 1e-12;

/// Reciprocal 2-norm condition number of a square matrix; 0 when exactly
/// singular.
double reciprocal_condition(const ComplexMatrix& a);

/// Block companion matrix: first block row −C_k⁻¹C_{k−1}, …, −C_k⁻¹C_0,
/// identity blocks on the block subdiagonal. Throws
/// SingularLeadingCoefficient below kLeadingRcondThreshold.
ComplexMatrix companion_matrix(const MatrixPolynomial& p);

struct CompanionPencil {
  ComplexMatrix a;  // diag(C_k, I, …, I)
  ComplexMatrix b;  // first block row −C_{k−1}, …, −C_0; identity subdiagonal blocks
};

CompanionPencil companion_pencil(const MatrixPolynomial& p);

/// Eigenvalues whose predicted backward error exceeds this are refined.
inline constexpr double kRefineThreshold = 1e-10;
inline constexpr int kMaxAberthIterations = 100;

/// ε·(Σ|z|^j)·max‖C_j‖ / Σ|z|^j‖C_j‖ (Frobenius norms): the relative
/// backward error a normwise-stable companion solve can leave at z.
double predicted_backward_error(const MatrixPolynomial& p, cplx z);

/// Aberth iteration on det P, applied in place to the approximations whose
/// predicted backward error exceeds kRefineThreshold. The others stay fixed
/// and only contribute to the repulsion sums.
void refine_eigenvalues(const MatrixPolynomial& p, std::vector<cplx>& z);

/// The n·k finite eigenvalues. With p trailing zero weights the companion of
/// P(z)/z^p is solved, badly scaled approximations are refined, and n·p
/// exact zeros are appended.
std::vector<cplx> eigenvalues_of(const MatrixPolynomial& p, const EigenOptions& opts = {});

}  // namespace polyesd
