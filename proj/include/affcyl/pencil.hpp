#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "affcyl/frames.hpp"
#include "affcyl/gauss.hpp"

namespace affcyl {

inline constexpr double kDefaultGapTol = 1e-8;
inline constexpr int kDefaultPencilBudget = 64;
/// B' counts as singular below this smallest/largest singular value ratio.
inline constexpr double kLeadingFormTol = 1e-10;

/// How B' and B'' were picked from the span of the forms.
struct PencilSelection {
  enum class Kind { IndexPair, RandomCombination, Explicit };
  Kind kind = Kind::Explicit;
  int alpha_prime = -1;
  int alpha_double_prime = -1;
  int trial = -1;
  std::uint64_t seed = 0;
  std::vector<double> xi_prime;        // B' = sum xi'_alpha B^alpha
  std::vector<double> xi_double_prime; // B'' = sum xi''_alpha B^alpha
};

struct PencilAnalysis {
  PencilSelection selection;
  Eigen::MatrixXcd b_prime;
  Eigen::MatrixXcd b_double_prime;
  std::vector<Complex> eigenvalues; // roots of det(B'' + lambda B'), (re, im) ascending
  Eigen::MatrixXcd eigenbasis;      // column p pairs with eigenvalues[p]; largest entry = 1
  bool regular = false;
  bool distinct = false;
  double min_gap = 0.0;
  double eigen_condition = 1.0; // condition number of the eigenbasis
};

/// Roots of det(B'' + lambda B') as eigenvalues of -(B')^{-1} B''.
/// Throws SingularLeadingForm when B' is numerically singular.
std::vector<Complex> characteristic_eigenvalues(const Eigen::MatrixXcd& b_prime, const Eigen::MatrixXcd& b_double_prime);

struct Distinctness {
  bool distinct = true;
  double min_gap = 0.0;
};

/// distinct iff the smallest pairwise gap exceeds tol_gap * (1 + max |lambda|).
Distinctness eigenvalue_distinctness(std::span<const Complex> eigenvalues, double tol_gap = kDefaultGapTol);

/// Full analysis of one explicit pair (eigenvalues, gauged eigenbasis, flags).
PencilAnalysis analyze_pair(const Eigen::MatrixXcd& b_prime, const Eigen::MatrixXcd& b_double_prime,
                            double tol_gap = kDefaultGapTol);

/// Index pairs in lexicographic order first, then up to `budget` seeded random
/// combinations. Throws MTooSmall when m < 2 and NoRegularPair on exhaustion.
PencilAnalysis select_regular_pair(const SecondForms& forms, std::uint64_t seed, double tol_gap = kDefaultGapTol,
                                   int budget = kDefaultPencilBudget);

struct Diagonalization {
  /// diagonals[a][p]: p-th diagonal entry of C_a in the eigenbasis (a = 0 is C_0 = I).
  std::vector<std::vector<Complex>> diagonals;
  double off_diag_residual = 0.0; // max over a >= 1 of max|offdiag| / max(1, max|entry|)
  double forms_residual = 0.0;    // same measure for S^T B' S and S^T B'' S
  bool within_tol = true;
};

/// Transform every C_a into the pencil eigenbasis. Throws HypothesisNotMet
/// when the pencil is irregular or its eigenvalues are not distinct.
Diagonalization simultaneous_diagonalize(const PencilAnalysis& pa, const LeafData& data, double tol = 1e-8);

} // namespace affcyl
