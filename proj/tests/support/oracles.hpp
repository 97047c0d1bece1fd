#pragma once

// Reference computations that share no code with the library routes they check.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Matrix = std::vector<std::vector<cplx>>;

/// Determinant by Laplace expansion along the first row (n ≤ 8).
cplx cofactor_det(const Matrix& a);

/// Roots of Σ c_j z^j by Durand-Kerner iteration, polished with Newton.
std::vector<cplx> scalar_roots(const std::vector<cplx>& coeffs);

/// Minimum-cost perfect matching (Hungarian algorithm); returns assignment[i] = j.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

/// Largest |a_i − b_π(i)| under the optimal matching π.
double matched_distance(const std::vector<cplx>& a, const std::vector<cplx>& b);

/// Fixed-degree density straight from the Laplacian expansion
///   f = (1/4πk) [Σ(2j)²w_j r^{2j−2} / Σ w_j r^{2j} − (Σ 2j w_j r^{2j−1})² / (Σ w_j r^{2j})²]
/// with w_j = |α_j|², p = 0, plain summation (small k only).
double plain_density(const std::vector<double>& alpha, double r);
/// (1/k) Σ j w_j r^{2j} / Σ w_j r^{2j}, plain summation.
double plain_radial_cdf(const std::vector<double>& alpha, double r);

/// γ(n+1, x) complement for integer n: Γ(n+1, x) = n! e^{−x} Σ_{m≤n} x^m/m!.
double integer_upper_gamma(int n, double x);

/// Simpson rule on [a, b] with 2m panels.
template <class F>
double simpson(F f, double a, double b, int m) {
  const double h = (b - a) / (2 * m);
  double s = f(a) + f(b);
  for (int i = 1; i < 2 * m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Standard complex Gaussian matrix from std::normal_distribution.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

}  // namespace oracle
