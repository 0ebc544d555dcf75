#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace affcyl {

using Complex = std::complex<double>;

/// Outcome of a singular-value rank decision.
struct RankDecision {
  int rank = 0;
  std::vector<double> sigmas; // descending
  /// sigma_rank / sigma_{rank+1}; +inf when nothing was dropped or the
  /// first dropped value is exactly zero.
  double gap_ratio = std::numeric_limits<double>::infinity();
  /// False when the gap ratio is below the declared minimum.
  bool determined = true;
};

inline constexpr double kMinGapRatio = 1e3;

/// Rank with the relative policy sigma >= tol_rel * sigma_max; everything is
/// dropped when sigma_max <= abs_floor.
RankDecision numerical_rank(const Eigen::MatrixXcd& a, double tol_rel, double abs_floor = 0.0);

std::vector<double> singular_values(const Eigen::MatrixXcd& a);

/// sigma_max / sigma_min (inf when rank deficient).
double condition_number(const Eigen::MatrixXcd& a);

/// Orthonormal basis (unitary inner product) of the column space.
Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& a, double tol_rel = 1e-10);

/// Orthonormal basis of the orthogonal complement of span(basis). The result
/// depends only on the subspace: standard basis vectors are projected and
/// orthonormalized in index order.
Eigen::MatrixXcd orthonormal_complement(const Eigen::MatrixXcd& basis);

/// Right null space of `a` with the given dimension (smallest singular vectors).
Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& a, int dim);

/// Sine of the largest principal angle between two column spaces of equal
/// dimension; 1 when dimensions differ.
double subspace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Sine of the angle between the complex lines spanned by a and b.
double projective_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

Eigen::VectorXcd to_vector(std::span<const Complex> v);
std::vector<Complex> to_std(const Eigen::VectorXcd& v);

/// Largest |entry|, 0 for empty input.
double max_abs(const Eigen::MatrixXcd& a);

} // namespace affcyl
