#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace affcyl {

using Complex = std::complex<double>;
using Exponents = std::vector<int>;

/// Homogeneous polynomial stored densely over all monomials of its degree,
/// exponents in descending lexicographic order (x0^d first).
class HomogeneousPolynomial {
public:
  HomogeneousPolynomial() = default;
  HomogeneousPolynomial(int n_vars, int degree);

  static std::vector<Exponents> monomial_basis(int n_vars, int degree);
  /// c_0 x_0 + ... + c_k x_k
  static HomogeneousPolynomial linear(std::span<const Complex> coeffs);

  int n_vars() const { return n_vars_; }
  int degree() const { return degree_; }
  const std::vector<Exponents>& exponents() const { return exps_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  std::vector<Complex>& coeffs() { return coeffs_; }

  /// Coefficient of a monomial (0 if absent).
  Complex coeff(const Exponents& e) const;

  Complex evaluate(std::span<const Complex> x) const;
  double max_abs_coeff() const;

  HomogeneousPolynomial operator*(const HomogeneousPolynomial& other) const;

private:
  int n_vars_ = 0;
  int degree_ = 0;
  std::vector<Exponents> exps_;
  std::vector<Complex> coeffs_;
};

/// max |a - b| over coefficients divided by max(|a|_max, |b|_max).
double relative_coefficient_distance(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b);

/// det(sum_i x_i M_i) recovered by evaluation on the integer lattice
/// {alpha : |alpha| = r} and a solve against the monomial basis.
HomogeneousPolynomial determinant_polynomial(std::span<const Eigen::MatrixXcd> mats);

/// Coefficients (lowest degree first) of s -> f(p + s q), a polynomial of at
/// most `degree`, via samples on the unit circle.
std::vector<Complex> restrict_to_line(const std::function<Complex(std::span<const Complex>)>& f,
                                      std::span<const Complex> p, std::span<const Complex> q, int degree);

/// Roots of sum_k c_k s^k by companion-matrix eigenvalues. Leading
/// coefficients below tol_rel * max|c| are dropped first.
std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs, double tol_rel = 1e-12);

} // namespace affcyl
