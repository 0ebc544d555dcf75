#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "affcyl/gauss.hpp"
#include "affcyl/spec.hpp"

namespace affcyl {

inline constexpr double kMaxFrameCondition = 1e10;

/// Matrices of the basic equations along one generator.
///
/// Frame at A_0(u): leaf directions A_1..A_l, tangent complement
/// Ã_q = dA_0/du^q, then an orthonormal normal basis. C[a](p, q) is the
/// Ã_p-component of dA_a/du^q (C[0] = I); B[alpha](p, q) is the
/// alpha-th normal component of d^2 A_0 / du^p du^q.
struct LeafData {
  std::vector<Complex> u;
  std::vector<Eigen::MatrixXcd> C; // l + 1 matrices, r x r
  std::vector<Eigen::MatrixXcd> B; // N - n symmetric matrices, r x r
  /// H[alpha][i] = B[alpha] * C[i]; symmetric when the leaf data is consistent.
  std::vector<std::vector<Eigen::MatrixXcd>> H;
  int m = 0;
  double form_scale = 1.0;

  Eigen::VectorXcd base_point;  // A_0(u)
  Eigen::MatrixXcd leaf_dirs;   // N x l
  Eigen::MatrixXcd complement;  // N x r
  Eigen::MatrixXcd normals;     // N x (N - n)
  /// Relative normal component of dA_a/du^q; zero when the tangent space is
  /// constant along the generator.
  double tangency_residual = 0.0;
  double frame_condition = 1.0;

  int r() const { return static_cast<int>(C.front().rows()); }
  int l() const { return static_cast<int>(C.size()) - 1; }
};

/// Throws SingularBasePoint when the frame is rank deficient and
/// FrameIllConditioned when its condition number exceeds kMaxFrameCondition.
LeafData extract_leaf_data(const RuledSpec& spec, std::span<const Complex> u, double tol_rank = kDefaultRankTol);

/// Recompute H from B and C (after editing C, for instance).
void refresh_products(LeafData& data);

struct BasicEquationsReport {
  double residual = 0.0; // max over alpha, i of max |H - H^T|
  bool pass = true;
  int worst_alpha = -1;
  int worst_index = -1;
};

/// Symmetry of every B^alpha C_i, recomputed from B and C.
BasicEquationsReport check_basic_equations(const LeafData& data, double tol = 1e-8);

struct SecondOrderProfile {
  int m = 0;
  int osc_dim = 0; // n + m
};

SecondOrderProfile second_order_profile(const LeafData& data, double tol_rel = kDefaultRankTol);

/// The r x r forms of a leaf as a SecondForms value.
SecondForms leaf_forms(const LeafData& data);

} // namespace affcyl
