#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "affcyl/frames.hpp"
#include "affcyl/pencil.hpp"
#include "affcyl/polynomial.hpp"

namespace affcyl {

/// J(x^0, ..., x^l) = det(x^0 I + sum_a x^a C_a), homogeneous of degree r.
struct FocalPolynomial {
  HomogeneousPolynomial poly;
};

/// Hyperplanes x^0 + sum_a c_a x^a = 0 in leaf coordinates, one per
/// pencil eigenvector; repeated hyperplanes are kept as they are.
struct FocalDecomposition {
  std::vector<Eigen::VectorXcd> hyperplanes; // r covectors (1, c_1, ..., c_l)
  HomogeneousPolynomial product;
  double residual = 0.0; // relative coefficient mismatch between product and J
};

/// det(sum_alpha xi_alpha B^alpha) over the normal covectors.
struct FocalHypercone {
  HomogeneousPolynomial cone_poly;
  bool squarefree = false;
  /// Per probe line: smallest over largest singular value of the Sylvester
  /// matrix of the restriction and its derivative (0 means a repeated root).
  std::vector<double> probe_margins;
};

FocalPolynomial focal_polynomial(const LeafData& data);

/// Throws HypothesisNotMet when the diagonalization residual exceeds tol.
FocalDecomposition factor_focal(const LeafData& data, const PencilAnalysis& pa, double tol = 1e-8);

inline constexpr double kSquarefreeMargin = 1e-9;

/// Squarefree test: on three deterministic lines the restricted polynomial
/// must be coprime with its derivative (Sylvester margin above kSquarefreeMargin).
FocalHypercone focal_hypercone(std::span<const Eigen::MatrixXcd> forms);
FocalHypercone focal_hypercone(const SecondForms& forms);

/// Roots in t of J(1, t) for a one-dimensional generator.
std::vector<Complex> affine_focal_roots(const FocalPolynomial& focal);

/// An affine flat {point + directions * y}; `at_infinity` means the hyperplane
/// had no finite points in the leaf.
struct AmbientFlat {
  Eigen::VectorXcd point;
  Eigen::MatrixXcd directions;
  bool at_infinity = false;
};

/// The ambient (l-1)-flat cut out of the leaf through A_0(u) by a covector.
AmbientFlat focal_flat(const LeafData& data, const Eigen::VectorXcd& covector, double tol = 1e-12);

/// Sine distance of a covector from (1, 0, ..., 0), the leaf's hyperplane at infinity.
double distance_from_infinity(const Eigen::VectorXcd& covector);

} // namespace affcyl
