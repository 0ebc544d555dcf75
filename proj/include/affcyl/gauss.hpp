#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "affcyl/expr.hpp"
#include "affcyl/jet.hpp"
#include "affcyl/linalg.hpp"

namespace affcyl {

/// Columns of d1 whose smallest/largest singular value ratio falls below this
/// are treated as rank deficient.
inline constexpr double kImmersionTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-8;

struct TangentFrame {
  Eigen::VectorXcd point;
  Eigen::MatrixXcd tangent_basis; // N x n, the parameter partials
  Eigen::MatrixXcd normal_basis;  // N x (N - n), orthonormal, orthogonal to the tangent space
};

/// Second fundamental forms expressed in a fixed normal basis.
struct SecondForms {
  std::vector<Eigen::MatrixXcd> forms; // one symmetric matrix per normal direction
  int m = 0;                           // number of linearly independent forms
  double scale = 1.0;                  // magnitude of the data the forms came from
};

struct GaussRank {
  int r = 0;
  Eigen::MatrixXcd kernel_basis; // n x (n - r), common kernel of all forms
  RankDecision decision;
};

/// Tangent and normal bases at the jet's point. Throws NotImmersed when d1 is
/// rank deficient and InvalidSpec when the codimension is zero.
TangentFrame tangent_frame(const Jet2& jet);

/// Rank of the stack of vectorized forms, with an absolute floor scaled by
/// `scale`.
int count_independent_forms(std::span<const Eigen::MatrixXcd> forms, double tol_rel, double scale = 1.0);

SecondForms second_forms(const Jet2& jet, const TangentFrame& frame, double tol_rel = kDefaultRankTol);

/// Gauss-map rank as n minus the dimension of the common kernel of the forms.
/// The kernel comes from one SVD of the vertically stacked forms.
GaussRank gauss_rank(const SecondForms& forms, double tol_rel = kDefaultRankTol);

struct RankSample {
  std::vector<Complex> u;
  int r = -1;
  std::vector<double> sigmas;
  double gap_ratio = 0.0;
  bool determined = false;
  bool immersed = true;
  std::string error;
};

struct RankProfile {
  bool constant = false;
  int r = -1; // most frequent rank among immersed samples
  std::vector<RankSample> per_sample;
  std::vector<std::size_t> violations; // samples that disagree, are singular or undetermined
};

/// Gauss rank at every sample; NotImmersed samples are recorded, not thrown.
RankProfile rank_profile(const ExprMap& map, std::span<const std::vector<Complex>> samples,
                         double tol_rel = kDefaultRankTol);

} // namespace affcyl
