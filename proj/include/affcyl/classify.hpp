#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "affcyl/focal.hpp"
#include "affcyl/frames.hpp"
#include "affcyl/gauss.hpp"
#include "affcyl/pencil.hpp"
#include "affcyl/spec.hpp"

namespace affcyl {

enum class Verdict { Cylinder, Cone, NonDegenerate, HypothesisFailure, Undetermined };

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

/// Process exit code for a verdict: 0 Cylinder/Cone, 2 HypothesisFailure,
/// 3 Undetermined, 4 NonDegenerate.
int exit_code(Verdict v);

struct Tolerances {
  double rank = kDefaultRankTol;
  double gap = kDefaultGapTol;
  double coincide = 1e-6; // sine distance between focal covectors
  double residual = 1e-8; // basic equations, diagonalization, drift, vertex fit
};

struct ClassifyConfig {
  Tolerances tol;
  std::uint64_t seed = 0;
  int pencil_budget = kDefaultPencilBudget;
};

namespace reason {
inline constexpr const char* kSingularPoint = "singular point on sampled chart";
inline constexpr const char* kRankNotConstant = "rank not constant on sampled chart";
inline constexpr const char* kRankUndetermined = "rank gap ratio below 1e3";
inline constexpr const char* kLeafMismatch = "ruled generators are not the Gauss-map leaves";
inline constexpr const char* kRankOne = "r >= 2 required";
inline constexpr const char* kRankRange = "2 <= r <= n - 1 violated";
inline constexpr const char* kCodimension = "N - n >= 2 violated";
inline constexpr const char* kTooFewForms = "m >= 2 violated";
inline constexpr const char* kNotDistinct = "no regular pencil with distinct eigenvalues";
inline constexpr const char* kRuledFormRequired = "leaf-adapted ruled form required";
inline constexpr const char* kNoCriterion = "focal hyperplanes neither coincide nor lie at infinity";
} // namespace reason

/// Everything computed along one sampled generator.
struct SampleEvidence {
  std::vector<Complex> u;
  std::optional<LeafData> leaf;
  BasicEquationsReport basic;
  std::optional<FocalPolynomial> focal;
  std::optional<FocalHypercone> hypercone;
  std::optional<PencilAnalysis> pencil;
  std::optional<Diagonalization> diagonalization;
  std::optional<FocalDecomposition> decomposition;
  double coincidence_spread = 0.0;  // max pairwise sine distance of covectors
  double infinity_distance = 0.0;   // max sine distance from (1, 0, ..., 0)
  std::string failure;              // first stage that did not complete
  bool hypothesis_failure = false;  // true when `failure` is a violated hypothesis
};

struct GeneratorReport {
  std::vector<Eigen::VectorXcd> generators; // A_a(u_0) projected onto the fitted span
  Eigen::MatrixXcd basis;                   // orthonormal, N x l
  double drift = 0.0;                       // max subspace distance between samples
};

struct DirectorReport {
  std::vector<Eigen::VectorXcd> points;
  int dim = 0;  // rank of the projected tangent map (minimum over samples)
  int rank = 0; // Gauss rank of the projected variety (minimum over samples)
  bool nondegenerate = false;
};

struct VertexReport {
  AmbientFlat flat; // point closest to the origin + orthonormal directions
  double residual = 0.0;
};

struct Classification {
  Verdict verdict = Verdict::Undetermined;
  std::string reason;
  int r = -1, l = -1, m = -1, n = 0, N = 0;
  RankProfile rank_profile;
  std::vector<SampleEvidence> samples;
  std::optional<GeneratorReport> generators;
  std::optional<DirectorReport> director;
  std::optional<VertexReport> vertex;
  std::vector<std::string> notes;
  double max_residual = 0.0;
  ClassifyConfig config;
};

/// Deterministic base samples drawn uniformly from the chart's sampling box.
std::vector<std::vector<Complex>> sample_base_points(const RuledSpec& spec, int count, std::uint64_t seed);
std::vector<std::vector<Complex>> sample_chart_points(const ChartSpec& spec, int count, std::uint64_t seed);

/// Leaf data, basic equations, pencil, diagonalization and focal objects at one base point.
SampleEvidence analyze_leaf(const RuledSpec& spec, std::span<const Complex> u, const ClassifyConfig& cfg = {});

/// Cylinder / cone decision for a ruled submanifold.
Classification classify(const RuledSpec& spec, std::span<const std::vector<Complex>> samples,
                        const ClassifyConfig& cfg = {});

/// A chart without leaf structure can only be screened (rank, codimension).
Classification classify(const ChartSpec& spec, std::span<const std::vector<Complex>> samples,
                        const ClassifyConfig& cfg = {});

/// Throws DriftTooLarge when the generator span moves by more than tol.
GeneratorReport extract_generators(const RuledSpec& spec, std::span<const std::vector<Complex>> samples, double tol = 1e-8);

/// Project A_0 along the generator span onto a complementary flat and report
/// dimension and Gauss rank of the image.
DirectorReport director_variety(const RuledSpec& spec, std::span<const std::vector<Complex>> samples,
                                const Eigen::MatrixXcd& generator_basis, double tol_rank = kDefaultRankTol);

/// Least-squares common flat of the per-sample focal flats. Throws
/// InconsistentVertex when the flats disagree by more than cfg.tol.residual
/// or the focal hyperplanes do not coincide.
VertexReport recover_vertex(const RuledSpec& spec, std::span<const std::vector<Complex>> samples,
                            const ClassifyConfig& cfg = {});

/// Distance between two affine flats of equal dimension: max of the point
/// offset orthogonal to the directions and the direction-space distance.
double flat_distance(const AmbientFlat& a, const AmbientFlat& b);

} // namespace affcyl
