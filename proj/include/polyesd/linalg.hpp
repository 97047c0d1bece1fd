#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyesd/errors.hpp"

namespace polyesd {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Entries are checked for finiteness when a
/// matrix is built from external data; element access does not re-check.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cplx* row(std::size_t i) { return data_.data() + i * cols_; }
  const cplx* row(std::size_t i) const { return data_.data() + i * cols_; }

  std::span<const cplx> entries() const { return data_; }
  std::span<cplx> entries() { return data_; }

  double frobenius_norm() const;
  double max_abs() const;
  ComplexMatrix adjoint() const;
  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Packed partial-pivoting LU: rows of the input are permuted by `pivots`
/// (pivots[i] is the original row now at position i), unit-lower L below the
/// diagonal, U on and above it.
struct LUFactors {
  ComplexMatrix lu;
  std::vector<std::size_t> pivots;
  int sign = 1;

  std::size_t size() const { return lu.rows(); }
  ComplexMatrix lower() const;
  ComplexMatrix upper() const;
  /// Row-permuted copy of `a`, i.e. P·A.
  ComplexMatrix permute_rows(const ComplexMatrix& a) const;
  /// Solves A·X = B in place; throws SingularMatrixError on an exact zero pivot.
  ComplexMatrix solve(const ComplexMatrix& b) const;
  ComplexMatrix inverse() const;
};

LUFactors lu_factor(const ComplexMatrix& a);

/// Σ ln|u_ii|, -inf on an exactly zero pivot.
double log_abs_det(const LUFactors& f);

/// Limits for the nonsymmetric eigensolver.
struct EigenOptions {
  bool balance = true;
  /// Total QR sweeps allowed are max_sweeps_per_row · m.
  std::size_t max_sweeps_per_row = 100;
};

/// All m eigenvalues (with multiplicity) of a square matrix: balancing,
/// Householder Hessenberg reduction, then single-shift complex QR with
/// Wilkinson shifts and deflation. Order is the deflation order.
std::vector<cplx> eigenvalues(const ComplexMatrix& a, const EigenOptions& opts = {});

/// Same pipeline, with each stage exposed for testing.
namespace detail {
/// Parlett-Reinsch scaling with powers of two; returns the scaled matrix and
/// the diagonal D such that result = D⁻¹·A·D.
ComplexMatrix balance(const ComplexMatrix& a, std::vector<double>* scaling = nullptr);
/// Unitary similarity to upper Hessenberg form (below-subdiagonal entries
/// are set to exact zero).
ComplexMatrix hessenberg(const ComplexMatrix& a);
/// Eigenvalues of an upper Hessenberg matrix; destroys h.
std::vector<cplx> hessenberg_qr(ComplexMatrix& h, std::size_t max_sweeps);
}  // namespace detail

/// Eigenvalues of a Hermitian matrix in ascending order (tridiagonalization
/// plus implicit QL). Only the lower triangle is read.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& a);

/// Descending singular values, min(rows, cols) of them, from the Gram matrix.
std::vector<double> singular_values(const ComplexMatrix& a);

}  // namespace polyesd
