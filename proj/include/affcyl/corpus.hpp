#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "affcyl/classify.hpp"
#include "affcyl/spec.hpp"

namespace affcyl {

/// What an entry should classify as. Fields left at -1 / empty are not checked.
struct Expected {
  int r = -1, l = -1, m = -1;
  Verdict verdict = Verdict::Undetermined;
  std::string reason;
  std::optional<Eigen::MatrixXcd> generators; // orthonormal basis of the generator span
  std::optional<AmbientFlat> vertex;
  std::map<std::string, std::string> source; // field -> how the value was obtained
};

struct CorpusEntry {
  std::string name;
  std::uint64_t seed = 0;
  SpecDocument spec;
  Expected expected;
};

/// Cylinder over `director` with constant generator directions.
/// Throws DependentGenerators when the directions meet the director's tangent spaces.
CorpusEntry make_cylinder(std::string name, const ExprMap& director, const std::vector<Eigen::VectorXcd>& generator_dirs,
                          std::uint64_t seed, std::vector<Interval> domain = {});

/// Cone joining a director to an (l-1)-flat (point + l-1 directions).
/// The ruled form is A_0 = Y, A_a = directions for a < l, A_l = point - Y.
/// Throws DegenerateJoin when the join is not immersed at the probe samples.
CorpusEntry make_cone(std::string name, const Eigen::VectorXcd& vertex_point, const Eigen::MatrixXcd& vertex_dirs,
                      const ExprMap& director, std::uint64_t seed, std::vector<Interval> domain = {});

/// x4 = x1 cos x3 + x2 sin x3 in A^4 in ruled form.
CorpusEntry sacksteder();
/// The same hypersurface as a graph chart.
CorpusEntry sacksteder_chart();

/// Join of r seeded cubic curves plus l - r + 1 constant directions; rejection
/// sampled until the pencil gap at the probe point exceeds 1e-3.
/// Requires N >= r + l + 2 and l >= r - 1. Throws BudgetExceeded after 256 tries.
CorpusEntry random_regular_example(std::uint64_t seed, int r, int l, int N);

CorpusEntry veronese_cylinder();
CorpusEntry veronese_cone();
CorpusEntry random_cylinder(std::uint64_t seed);
CorpusEntry random_cone(std::uint64_t seed);
/// Cylinder over a twisted cubic: Gauss rank 1.
CorpusEntry curve_cylinder();
/// Cylinder over (u, v, u^2, 2u^2, uv): every pencil has a repeated root.
CorpusEntry degenerate_pencil();
CorpusEntry plane();
CorpusEntry paraboloid();

/// Apply the projective map P ((N+1) x (N+1), homogeneous coordinate first)
/// and re-express the result in ruled form.
RuledSpec projective_transform(const RuledSpec& spec, const Eigen::MatrixXd& P);
/// x -> M x + b applied to the entry and to its expectations.
CorpusEntry affine_transform(const CorpusEntry& entry, const Eigen::MatrixXd& M, const Eigen::VectorXd& b);
/// u = S u' + c. The sampling domain is carried over unchanged.
RuledSpec base_reparametrize(const RuledSpec& spec, const Eigen::MatrixXd& S, const Eigen::VectorXd& c);
/// Random affine map with M = I + 0.4 U, U uniform in [-1, 1], cond(M) < 1e3.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> random_affine_map(std::uint64_t seed, int N);

/// A cone sent to a cylinder by moving its vertex to infinity and a cylinder
/// sent to a cone by bringing its generator directions back; each image is
/// then moved by a random affine map.
struct DualityPair {
  CorpusEntry cone, cylinder_from_cone;
  CorpusEntry cylinder, cone_from_cylinder;
};
DualityPair duality_pair(std::uint64_t seed);

struct BruteForceRank {
  int rank = 0;
  std::vector<double> sigmas;
  double gap_ratio = 0.0;
};
/// Rank of the finite-difference differential of x -> orthogonal projector onto
/// the tangent space. Throws NotImmersed.
BruteForceRank brute_force_gauss_rank(const ExprMap& map, std::span<const Complex> point, double h = 1e-5);
/// dim(osculating space) - n from finite-difference second derivatives.
int brute_force_form_count(const ExprMap& map, std::span<const Complex> point, double h = 1e-4);

/// The chart of any spec document.
ExprMap chart_of(const SpecDocument& doc);
/// Deterministic chart points; ruled specs get leaf coordinates in [-t_max, t_max].
std::vector<std::vector<Complex>> sample_entry_points(const CorpusEntry& entry, int count, std::uint64_t seed,
                                                      double t_max = 0.25);
/// Base samples for classify (ruled) or chart samples (chart).
std::vector<std::vector<Complex>> classify_samples(const SpecDocument& doc, int count, std::uint64_t seed);
Classification classify_document(const SpecDocument& doc, std::span<const std::vector<Complex>> samples,
                                 const ClassifyConfig& cfg);

std::vector<CorpusEntry> standard_corpus(std::uint64_t seed);

/// Mismatches between a classification and the entry's expectations (empty when all agree).
std::vector<std::string> check_expectations(const CorpusEntry& entry, const Classification& c, double tol = 1e-8);

nlohmann::json to_json(const Expected& e);
Expected expected_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CorpusEntry& entry);
CorpusEntry entry_from_json(const nlohmann::json& j);

/// Writes one JSON file per entry plus manifest.json. Throws std::runtime_error with the path on IO failure.
void write_corpus(const std::vector<CorpusEntry>& entries, std::uint64_t seed, const std::filesystem::path& dir);
std::vector<CorpusEntry> read_corpus(const std::filesystem::path& dir);

} // namespace affcyl
