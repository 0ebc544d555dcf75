#include <gtest/gtest.h>

#include "affcyl/corpus.hpp"
#include "affcyl/error.hpp"
#include "affcyl/pencil.hpp"
#include "affcyl/random.hpp"

using namespace affcyl;

namespace {

Eigen::MatrixXcd m2(Complex a, Complex b, Complex c, Complex d) {
  Eigen::MatrixXcd m(2, 2);
  m << a, b, c, d;
  return m;
}

Eigen::MatrixXcd random_symmetric(SeededRng& rng, int r) {
  Eigen::MatrixXcd m(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) m(i, j) = m(j, i) = rng.uniform(-1.0, 1.0);
  return m;
}

SecondForms forms_of(std::vector<Eigen::MatrixXcd> f) {
  SecondForms s;
  s.m = count_independent_forms(f, 1e-8);
  s.forms = std::move(f);
  return s;
}

} // namespace

TEST(Pencil, DiagonalCase) {
  const auto ev = characteristic_eigenvalues(Eigen::MatrixXcd::Identity(2, 2), m2(1, 0, 0, 2));
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(std::abs(ev[0] - Complex(-2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ev[1] - Complex(-1.0)), 0.0, 1e-15);
  const auto d = eigenvalue_distinctness(ev);
  EXPECT_TRUE(d.distinct);
  EXPECT_NEAR(d.min_gap, 1.0, 1e-15);
}

TEST(Pencil, VeroneseHalfRoots) {
  const auto pa = analyze_pair(2.0 * Eigen::MatrixXcd::Identity(2, 2), m2(0, 1, 1, 0));
  ASSERT_EQ(pa.eigenvalues.size(), 2u);
  EXPECT_NEAR(std::abs(pa.eigenvalues[0] - Complex(-0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pa.eigenvalues[1] - Complex(0.5)), 0.0, 1e-15);
  EXPECT_TRUE(pa.distinct);
  for (std::size_t p = 0; p < 2; ++p) {
    const Eigen::VectorXcd s = pa.eigenbasis.col(static_cast<Eigen::Index>(p));
    const Eigen::VectorXcd res = (m2(0, 1, 1, 0) + pa.eigenvalues[p] * 2.0 * Eigen::MatrixXcd::Identity(2, 2)) * s;
    EXPECT_LE(res.norm(), 1e-14);
  }
}

TEST(Pencil, ProportionalFormsRepeatRoot) {
  const Eigen::MatrixXcd b = m2(2, 1, 1, 3);
  const auto pa = analyze_pair(b, 2.0 * b);
  for (auto z : pa.eigenvalues) EXPECT_NEAR(std::abs(z - Complex(-2.0)), 0.0, 1e-12);
  EXPECT_FALSE(pa.distinct);
}

TEST(Pencil, BelowResolutionNotDistinct) {
  const std::vector<Complex> ev{0.5, 0.5 + 1e-14};
  EXPECT_FALSE(eigenvalue_distinctness(ev).distinct);
}

TEST(Pencil, DefectivePencilNotDistinct) {
  // det(B'' + lambda B') = -(1 + lambda)^2 with a single eigenvector.
  const Eigen::MatrixXcd bp = m2(1, 1, 1, 0), bpp = m2(0, 1, 1, 0);
  EXPECT_FALSE(analyze_pair(bp, bpp).distinct);
}

TEST(Pencil, SingularLeadingForm) {
  EXPECT_THROW(analyze_pair(m2(1, 0, 0, 0), m2(0, 1, 1, 0)), SingularLeadingForm);
}

TEST(Pencil, SelectionErrors) {
  EXPECT_THROW(select_regular_pair(forms_of({Eigen::MatrixXcd::Identity(2, 2)}), 0), MTooSmall);
  const Eigen::MatrixXcd b = m2(2, 1, 1, 3);
  EXPECT_THROW(select_regular_pair(forms_of({b, 2.0 * b}), 0), MTooSmall);
  EXPECT_THROW(select_regular_pair(forms_of({m2(1, 0, 0, 0), m2(0, 1, 1, 0)}), 0, kDefaultGapTol, 16), NoRegularPair);
}

TEST(Pencil, SelectionPrefersIndexPairs) {
  const auto pa = select_regular_pair(forms_of({2.0 * Eigen::MatrixXcd::Identity(2, 2), m2(0, 1, 1, 0)}), 3);
  EXPECT_EQ(pa.selection.kind, PencilSelection::Kind::IndexPair);
  EXPECT_EQ(pa.selection.alpha_prime, 0);
  EXPECT_EQ(pa.selection.alpha_double_prime, 1);
}

TEST(Pencil, RoundoffFormNeverLeads) {
  // Every member of span{E00-like, swap} has a double root; the third form is pure noise.
  const auto a = m2(1.0, 0.0, 0.0, 0.0), b = m2(0.0, 1.0, 1.0, 0.0);
  const auto noise = m2(9e-16, -7e-17, -7e-17, -3e-17);
  EXPECT_THROW(select_regular_pair(forms_of({a, b, noise}), 3), NoRegularPair);
}

TEST(Pencil, RandomCombinationIsSeeded) {
  // Both forms are singular, so a combination must be drawn.
  const SecondForms t = forms_of({m2(1, 1, 1, 1), m2(1, -1, -1, 1)});
  const auto c = select_regular_pair(t, 42);
  const auto d = select_regular_pair(t, 42);
  EXPECT_EQ(c.selection.kind, PencilSelection::Kind::RandomCombination);
  EXPECT_EQ(c.selection.trial, d.selection.trial);
  EXPECT_EQ(c.selection.xi_prime, d.selection.xi_prime);
  EXPECT_EQ(c.eigenvalues, d.eigenvalues);
}

TEST(Pencil, EigenvaluesInvariantUnderCongruence) {
  SeededRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 2 + trial % 3;
    const Eigen::MatrixXcd bp = random_symmetric(rng, r) + 3.0 * Eigen::MatrixXcd::Identity(r, r);
    const Eigen::MatrixXcd bpp = random_symmetric(rng, r);
    Eigen::MatrixXcd s(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) s(i, j) = (i == j ? 1.0 : 0.0) + 0.5 * rng.uniform(-1.0, 1.0);
    const auto a = analyze_pair(bp, bpp).eigenvalues;
    const auto b = analyze_pair(s.transpose() * bp * s, s.transpose() * bpp * s).eigenvalues;
    for (std::size_t p = 0; p < a.size(); ++p) EXPECT_LE(std::abs(a[p] - b[p]), 1e-10);
  }
}

TEST(Diagonalize, CylinderAndCone) {
  for (const auto& e : {veronese_cylinder(), veronese_cone()}) {
    const auto& spec = std::get<RuledSpec>(e.spec);
    const LeafData d = extract_leaf_data(spec, std::vector<Complex>{0.2, 0.3});
    const auto pa = select_regular_pair(leaf_forms(d), 0);
    const auto diag = simultaneous_diagonalize(pa, d);
    EXPECT_LE(diag.off_diag_residual, 1e-8) << e.name;
    EXPECT_LE(diag.forms_residual, 1e-8) << e.name;
    for (int a = 1; a <= spec.l; ++a) {
      const auto& row = diag.diagonals[static_cast<std::size_t>(a)];
      for (auto z : row) EXPECT_LE(std::abs(z - row.front()), 1e-8) << e.name;
    }
  }
}

TEST(Diagonalize, RegularExamples) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto e = random_regular_example(seed, seed == 2 ? 3 : 2, 2, seed == 2 ? 7 : 6);
    const auto& spec = std::get<RuledSpec>(e.spec);
    for (const auto& u : sample_base_points(spec, 5, seed)) {
      const LeafData d = extract_leaf_data(spec, u);
      const auto pa = select_regular_pair(leaf_forms(d), seed);
      EXPECT_TRUE(pa.distinct);
      EXPECT_GT(pa.min_gap, 0.0);
      EXPECT_LE(simultaneous_diagonalize(pa, d).off_diag_residual, 1e-8);
    }
  }
}

TEST(Diagonalize, FaultInjectionFlagged) {
  const auto e = random_regular_example(1, 2, 2, 6);
  const auto& spec = std::get<RuledSpec>(e.spec);
  LeafData d = extract_leaf_data(spec, sample_base_points(spec, 1, 9)[0]);
  const auto pa = select_regular_pair(leaf_forms(d), 0);
  const Eigen::MatrixXcd& s = pa.eigenbasis;
  Eigen::MatrixXcd inject = Eigen::MatrixXcd::Zero(2, 2);
  inject(0, 1) = 0.1;
  d.C[1] += s * inject * s.inverse();
  const Eigen::MatrixXcd t = s.inverse() * d.C[1] * s;
  EXPECT_NEAR(std::abs(t(0, 1)), 0.1, 1e-8);
  const auto diag = simultaneous_diagonalize(pa, d);
  EXPECT_NEAR(diag.off_diag_residual, std::abs(t(0, 1)) / std::max(1.0, max_abs(t)), 1e-12);
  EXPECT_GT(diag.off_diag_residual, 1e-3);
  EXPECT_FALSE(diag.within_tol);
}

TEST(Diagonalize, RefusesRepeatedRoots) {
  const auto e = degenerate_pencil();
  const auto& spec = std::get<RuledSpec>(e.spec);
  const LeafData d = extract_leaf_data(spec, std::vector<Complex>{0.2, 0.3});
  EXPECT_THROW(select_regular_pair(leaf_forms(d), 0), NoRegularPair);
  const auto pa = analyze_pair(d.B[0] + d.B[1], 2.0 * (d.B[0] + d.B[1]));
  EXPECT_THROW(simultaneous_diagonalize(pa, d), HypothesisNotMet);
}
