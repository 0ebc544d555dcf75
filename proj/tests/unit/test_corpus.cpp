#include <gtest/gtest.h>

#include <filesystem>

#include "affcyl/corpus.hpp"
#include "affcyl/error.hpp"
#include "affcyl/random.hpp"
#include "affcyl/serialize.hpp"

using namespace affcyl;

TEST(BruteForce, KnownRanks) {
  EXPECT_EQ(brute_force_gauss_rank(chart_of(plane().spec), std::vector<Complex>{0.1, 0.2}).rank, 0);
  EXPECT_EQ(brute_force_gauss_rank(chart_of(paraboloid().spec), std::vector<Complex>{0.1, 0.2}).rank, 2);
  EXPECT_EQ(brute_force_gauss_rank(chart_of(veronese_cylinder().spec), std::vector<Complex>{0.1, 0.0, 0.2, 0.3}).rank, 2);
  const Expr u = Expr::var(0);
  ExprMap folded{{"u", "v"}, {u, u, u}};
  EXPECT_THROW(brute_force_gauss_rank(folded, std::vector<Complex>{0.1, 0.2}), NotImmersed);
}

TEST(BruteForce, OscillatingDimension) {
  EXPECT_EQ(brute_force_form_count(chart_of(veronese_cylinder().spec), std::vector<Complex>{0.0, 0.0, 0.2, 0.3}), 2);
  EXPECT_EQ(brute_force_form_count(chart_of(plane().spec), std::vector<Complex>{0.1, 0.2}), 0);
}

TEST(Constructions, Shapes) {
  const auto cyl = std::get<RuledSpec>(veronese_cylinder().spec);
  EXPECT_EQ(cyl.n(), 4);
  EXPECT_EQ(cyl.N, 6);
  EXPECT_EQ(cyl.r, 2);
  EXPECT_EQ(cyl.l, 2);
  EXPECT_EQ(curve_cylinder().expected.verdict, Verdict::HypothesisFailure);
  EXPECT_EQ(veronese_cone().expected.verdict, Verdict::Cone);
  EXPECT_EQ(random_cylinder(3).expected.verdict, Verdict::Cylinder);
  EXPECT_EQ(random_cone(3).expected.verdict, Verdict::Cone);
}

TEST(Constructions, DependentGenerators) {
  const Expr u = Expr::var(0), v = Expr::var(1);
  // d/du of this director is e1 everywhere.
  ExprMap dir{{"u", "v"}, {u, v, v * v, v * v * v, Expr(0.0), Expr(0.0)}};
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(6), e6 = Eigen::VectorXcd::Zero(6);
  e1(0) = 1.0;
  e6(5) = 1.0;
  EXPECT_THROW(make_cylinder("bad", dir, {e1, e6}, 0), DependentGenerators);
}

TEST(Constructions, DegenerateJoin) {
  const Expr u = Expr::var(0), v = Expr::var(1);
  ExprMap dir{{"u", "v"}, {u, v, v * v, v * v * v, Expr(1.0), Expr(0.0)}};
  Eigen::MatrixXcd along_tangent = Eigen::MatrixXcd::Zero(6, 1);
  along_tangent(0, 0) = 1.0;
  EXPECT_THROW(make_cone("bad", Eigen::VectorXcd::Zero(6), along_tangent, dir, 0), DegenerateJoin);
}

TEST(Constructions, SackstederSatisfiesGraphEquation) {
  const auto chart = chart_of(sacksteder().spec);
  SeededRng rng(1);
  for (int k = 0; k < 10; ++k) {
    const std::vector<Complex> x{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto y = chart.evaluate(x);
    EXPECT_NEAR(std::abs(y[3] - (y[0] * std::cos(y[2]) + y[1] * std::sin(y[2]))), 0.0, 1e-14);
  }
}

TEST(Constructions, RegularExampleRequirements) {
  EXPECT_THROW(random_regular_example(1, 2, 2, 5), InvalidSpec);
  EXPECT_THROW(random_regular_example(1, 3, 1, 8), InvalidSpec);
  const auto a = random_regular_example(2, 3, 2, 7);
  EXPECT_EQ(a.expected.r, 3);
  EXPECT_EQ(dump(to_json(a)), dump(to_json(random_regular_example(2, 3, 2, 7))));
}

TEST(Transforms, ProjectiveImageOfConeIsCylinder) {
  const auto pair = duality_pair(3);
  EXPECT_EQ(pair.cone.expected.verdict, Verdict::Cone);
  EXPECT_EQ(pair.cylinder_from_cone.expected.verdict, Verdict::Cylinder);
  EXPECT_EQ(pair.cylinder.expected.verdict, Verdict::Cylinder);
  EXPECT_EQ(pair.cone_from_cylinder.expected.verdict, Verdict::Cone);
}

TEST(Transforms, ReparametrizationKeepsImage) {
  const auto spec = std::get<RuledSpec>(veronese_cone().spec);
  Eigen::MatrixXd S(2, 2);
  S << 1.2, 0.3, -0.4, 0.9;
  Eigen::VectorXd c(2);
  c << 0.1, -0.05;
  const RuledSpec moved = base_reparametrize(spec, S, c);
  const std::vector<Complex> up{0.2, -0.3};
  const Eigen::Vector2d uu = S * Eigen::Vector2d(0.2, -0.3) + c;
  const std::vector<Complex> u{uu(0), uu(1)};
  const auto a = moved.base.evaluate(up), b = spec.base.evaluate(u);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(std::abs(a[k] - b[k]), 0.0, 1e-14);
}

TEST(Corpus, DeterministicAndLargeEnough) {
  const auto a = standard_corpus(7), b = standard_corpus(7);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_GE(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(dump(to_json(a[i])), dump(to_json(b[i])));
}

TEST(Corpus, ExpectedRankMatchesBothOracles) {
  for (const auto& e : standard_corpus(7)) {
    const ExprMap chart = chart_of(e.spec);
    for (const auto& x : sample_entry_points(e, 6, 13)) {
      const Jet2 j = eval_jet2(chart, x);
      EXPECT_EQ(gauss_rank(second_forms(j, tangent_frame(j))).r, e.expected.r) << e.name;
      EXPECT_EQ(brute_force_gauss_rank(chart, x).rank, e.expected.r) << e.name;
    }
  }
}

TEST(Corpus, EntryJsonRoundTrip) {
  for (const auto& e : standard_corpus(7)) {
    const auto j = to_json(e);
    const auto back = entry_from_json(nlohmann::json::parse(dump(j)));
    EXPECT_EQ(dump(to_json(back)), dump(j)) << e.name;
  }
}

TEST(Corpus, WriteAndRead) {
  const auto dir = std::filesystem::temp_directory_path() / "affcyl_corpus_test";
  std::filesystem::remove_all(dir);
  const auto entries = standard_corpus(3);
  write_corpus(entries, 3, dir);
  const auto back = read_corpus(dir);
  ASSERT_EQ(back.size(), entries.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i].name, entries[i].name);
  std::filesystem::remove_all(dir);
}
