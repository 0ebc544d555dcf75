#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "affcyl/expr.hpp"

namespace affcyl {

/// Value, first and second partials of a map at one point.
struct Jet2 {
  Eigen::VectorXcd value;           // N
  Eigen::MatrixXcd d1;              // N x n
  std::vector<Eigen::MatrixXcd> d2; // N entries, each n x n and symmetric

  int n_out() const { return static_cast<int>(value.size()); }
  int n_params() const { return static_cast<int>(d1.cols()); }
};

/// Exact (to roundoff) jet by second-order Taylor arithmetic through the tree.
/// Throws DomainError on a vanishing denominator.
Jet2 eval_jet2(const ExprMap& map, std::span<const Complex> point);

struct FiniteDiffSteps {
  double first = 1e-5;
  double second = 1e-4;
};

/// Central-difference estimate of the jet; truncation error O(h^2).
Jet2 finite_diff_jet2(const ExprMap& map, std::span<const Complex> point, FiniteDiffSteps steps = {});
Jet2 finite_diff_jet2(const ExprMap& map, std::span<const Complex> point, double h);

/// Largest absolute deviation between two jets of the same shape.
double jet_distance(const Jet2& a, const Jet2& b);

} // namespace affcyl
