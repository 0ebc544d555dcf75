#include "affcyl/classify.hpp"

#include <algorithm>
#include <map>

#include "affcyl/error.hpp"
#include "affcyl/random.hpp"

namespace affcyl {

std::string to_string(Verdict v) {
  switch (v) {
  case Verdict::Cylinder: return "Cylinder";
  case Verdict::Cone: return "Cone";
  case Verdict::NonDegenerate: return "NonDegenerate";
  case Verdict::HypothesisFailure: return "HypothesisFailure";
  case Verdict::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

Verdict verdict_from_string(const std::string& s) {
  for (auto v : {Verdict::Cylinder, Verdict::Cone, Verdict::NonDegenerate, Verdict::HypothesisFailure, Verdict::Undetermined})
    if (to_string(v) == s) return v;
  throw ParseError("unknown verdict '" + s + "'");
}

int exit_code(Verdict v) {
  switch (v) {
  case Verdict::Cylinder:
  case Verdict::Cone: return 0;
  case Verdict::HypothesisFailure: return 2;
  case Verdict::Undetermined: return 3;
  case Verdict::NonDegenerate: return 4;
  }
  return 3;
}

namespace {

std::vector<std::vector<Complex>> sample_box(const std::vector<Interval>& domain, int count, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<std::vector<Complex>> out;
  for (int s = 0; s < count; ++s) {
    std::vector<Complex> u;
    for (auto [lo, hi] : domain) u.emplace_back(rng.uniform(lo, hi), 0.0);
    out.push_back(std::move(u));
  }
  return out;
}

Eigen::VectorXcd common_covector(const FocalDecomposition& dec) {
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(dec.hyperplanes.front().size());
  for (const auto& h : dec.hyperplanes) acc += h / h(0);
  return acc / static_cast<double>(dec.hyperplanes.size());
}

Eigen::MatrixXcd dominant_subspace(const Eigen::MatrixXcd& hermitian, int dim) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hermitian);
  return es.eigenvectors().rightCols(dim); // eigenvalues ascend
}

VertexReport fit_vertex(const std::vector<AmbientFlat>& flats, int l, double tol) {
  const Eigen::Index N = flats.front().point.size();
  const int dim = l - 1;
  Eigen::MatrixXcd mean_proj = Eigen::MatrixXcd::Zero(N, N);
  std::vector<Eigen::MatrixXcd> bases;
  for (const auto& f : flats) {
    if (f.at_infinity) throw InconsistentVertex("focal hyperplane lies at infinity");
    bases.push_back(orthonormal_basis(f.directions));
    mean_proj += bases.back() * bases.back().adjoint();
  }
  mean_proj /= static_cast<double>(flats.size());
  const Eigen::MatrixXcd v = dim > 0 ? dominant_subspace(mean_proj, dim) : Eigen::MatrixXcd(N, 0);

  // Least squares for the point: sum_s Pi_s (x - p_s) = 0, Pi_s = I - P_{D_s}.
  Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Zero(N, N);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(N);
  for (std::size_t s = 0; s < flats.size(); ++s) {
    const Eigen::MatrixXcd pi = Eigen::MatrixXcd::Identity(N, N) - bases[s] * bases[s].adjoint();
    lhs += pi;
    rhs += pi * flats[s].point;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(lhs);
  cod.setThreshold(1e-10);
  Eigen::VectorXcd x = cod.solve(rhs);
  x -= v * (v.adjoint() * x);

  VertexReport out;
  out.flat = {x, v, false};
  for (const auto& f : flats) out.residual = std::max(out.residual, flat_distance(out.flat, f));
  if (out.residual > tol)
    throw InconsistentVertex("focal flats disagree across samples (residual " + std::to_string(out.residual) + ")");
  return out;
}

} // namespace

double flat_distance(const AmbientFlat& a, const AmbientFlat& b) {
  const Eigen::MatrixXcd qa = orthonormal_basis(a.directions);
  Eigen::VectorXcd offset = b.point - a.point;
  if (qa.cols() > 0) offset -= qa * (qa.adjoint() * offset);
  double d = offset.norm();
  if (a.directions.cols() > 0 || b.directions.cols() > 0) d = std::max(d, subspace_distance(a.directions, b.directions));
  return d;
}

std::vector<std::vector<Complex>> sample_base_points(const RuledSpec& spec, int count, std::uint64_t seed) {
  return sample_box(effective_domain(spec.domain, spec.r), count, seed);
}

std::vector<std::vector<Complex>> sample_chart_points(const ChartSpec& spec, int count, std::uint64_t seed) {
  return sample_box(effective_domain(spec.domain, spec.map.n_params()), count, seed);
}

SampleEvidence analyze_leaf(const RuledSpec& spec, std::span<const Complex> u, const ClassifyConfig& cfg) {
  SampleEvidence ev;
  ev.u.assign(u.begin(), u.end());
  try {
    ev.leaf = extract_leaf_data(spec, u, cfg.tol.rank);
  } catch (const Error& e) {
    ev.failure = e.what();
    return ev;
  }
  const LeafData& leaf = *ev.leaf;
  ev.basic = check_basic_equations(leaf, cfg.tol.residual);
  ev.focal = focal_polynomial(leaf);
  ev.hypercone = focal_hypercone(leaf.B);
  if (!ev.basic.pass) {
    ev.failure = "basic equations residual " + std::to_string(ev.basic.residual);
    return ev;
  }
  try {
    ev.pencil = select_regular_pair(leaf_forms(leaf), cfg.seed, cfg.tol.gap, cfg.pencil_budget);
  } catch (const MTooSmall& e) {
    ev.failure = reason::kTooFewForms;
    ev.hypothesis_failure = true;
    return ev;
  } catch (const NoRegularPair& e) {
    ev.failure = reason::kNotDistinct;
    ev.hypothesis_failure = true;
    return ev;
  }
  ev.diagonalization = simultaneous_diagonalize(*ev.pencil, leaf, cfg.tol.residual);
  try {
    ev.decomposition = factor_focal(leaf, *ev.pencil, cfg.tol.residual);
  } catch (const HypothesisNotMet& e) {
    ev.failure = e.what();
    return ev;
  }
  const auto& hs = ev.decomposition->hyperplanes;
  for (std::size_t p = 0; p < hs.size(); ++p) {
    ev.infinity_distance = std::max(ev.infinity_distance, distance_from_infinity(hs[p]));
    for (std::size_t q = p + 1; q < hs.size(); ++q)
      ev.coincidence_spread = std::max(ev.coincidence_spread, projective_distance(hs[p], hs[q]));
  }
  return ev;
}

Classification classify(const RuledSpec& spec, std::span<const std::vector<Complex>> samples, const ClassifyConfig& cfg) {
  spec.validate();
  if (samples.empty()) throw InvalidSpec("classify needs at least one sample");
  Classification out;
  out.config = cfg;
  out.n = spec.n();
  out.N = spec.N;
  out.l = spec.l;

  const ExprMap chart = full_chart(spec);
  std::vector<std::vector<Complex>> points;
  const std::vector<Complex> origin(static_cast<std::size_t>(spec.l));
  for (const auto& u : samples) points.push_back(chart_point(origin, u));
  out.rank_profile = rank_profile(chart, points, cfg.tol.rank);
  out.r = out.rank_profile.r;

  auto finish = [&](Verdict v, std::string why) {
    out.verdict = v;
    out.reason = std::move(why);
    return out;
  };

  for (const auto& s : out.rank_profile.per_sample)
    if (!s.immersed) return finish(Verdict::HypothesisFailure, reason::kSingularPoint);
  for (const auto& s : out.rank_profile.per_sample)
    if (!s.determined) return finish(Verdict::Undetermined, reason::kRankUndetermined);
  if (!out.rank_profile.constant) return finish(Verdict::HypothesisFailure, reason::kRankNotConstant);
  if (out.r == out.n) return finish(Verdict::NonDegenerate, "Gauss map has full rank");
  if (out.r != spec.r) {
    out.notes.push_back("measured rank " + std::to_string(out.r) + ", ruled form declares r = " + std::to_string(spec.r));
    return finish(Verdict::HypothesisFailure, reason::kLeafMismatch);
  }

  for (const auto& u : samples) out.samples.push_back(analyze_leaf(spec, u, cfg));
  for (const auto& ev : out.samples) {
    if (ev.leaf) out.m = out.m < 0 ? ev.leaf->m : std::min(out.m, ev.leaf->m);
    out.max_residual = std::max(out.max_residual, ev.basic.residual);
    if (ev.diagonalization) out.max_residual = std::max(out.max_residual, ev.diagonalization->off_diag_residual);
    if (ev.decomposition) out.max_residual = std::max(out.max_residual, ev.decomposition->residual);
  }
  if (spec.l == 1) out.notes.push_back("l = 1: the generator-dimension bound l >= 2 is not enforced");

  if (out.r < 2) {
    if (out.r == 1) {
      double c_max = 0.0;
      for (const auto& ev : out.samples)
        if (ev.leaf)
          for (int a = 1; a <= spec.l; ++a) c_max = std::max(c_max, max_abs(ev.leaf->C[static_cast<std::size_t>(a)]));
      out.notes.push_back("informational: max |C_a| over samples = " + std::to_string(c_max) +
                          (c_max <= cfg.tol.residual ? " (parallel generators)" : " (generators not parallel)"));
      return finish(Verdict::HypothesisFailure, reason::kRankOne);
    }
    return finish(Verdict::HypothesisFailure, reason::kRankRange);
  }
  if (spec.N - spec.n() < 2) return finish(Verdict::HypothesisFailure, reason::kCodimension);

  for (const auto& ev : out.samples)
    if (!ev.failure.empty() && !ev.hypothesis_failure) return finish(Verdict::Undetermined, ev.failure);
  for (const auto& ev : out.samples)
    if (ev.hypothesis_failure && ev.failure == reason::kTooFewForms) return finish(Verdict::HypothesisFailure, reason::kTooFewForms);
  for (const auto& ev : out.samples)
    if (ev.hypothesis_failure) return finish(Verdict::HypothesisFailure, ev.failure);

  bool all_infinite = true, all_coincide = true;
  for (const auto& ev : out.samples) {
    all_infinite = all_infinite && ev.infinity_distance <= cfg.tol.coincide;
    all_coincide = all_coincide && ev.coincidence_spread <= cfg.tol.coincide;
  }

  if (all_infinite) {
    try {
      out.generators = extract_generators(spec, samples, cfg.tol.residual);
    } catch (const DriftTooLarge& e) {
      return finish(Verdict::Undetermined, e.what());
    }
    out.director = director_variety(spec, samples, out.generators->basis, cfg.tol.rank);
    if (!out.director->nondegenerate) out.notes.push_back("director variety is tangentially degenerate");
    return finish(Verdict::Cylinder, "all focal hyperplanes lie at infinity");
  }
  if (all_coincide) {
    std::vector<AmbientFlat> flats;
    for (const auto& ev : out.samples) flats.push_back(focal_flat(*ev.leaf, common_covector(*ev.decomposition)));
    try {
      out.vertex = fit_vertex(flats, spec.l, cfg.tol.residual);
    } catch (const InconsistentVertex& e) {
      out.notes.push_back(std::string("vertex flat not constant across samples: ") + e.what());
    }
    return finish(Verdict::Cone, "focal hyperplanes coincide in a finite hyperplane");
  }
  return finish(Verdict::Undetermined, reason::kNoCriterion);
}

Classification classify(const ChartSpec& spec, std::span<const std::vector<Complex>> samples, const ClassifyConfig& cfg) {
  spec.validate();
  if (samples.empty()) throw InvalidSpec("classify needs at least one sample");
  Classification out;
  out.config = cfg;
  out.n = spec.map.n_params();
  out.N = spec.map.n_out();
  out.rank_profile = rank_profile(spec.map, samples, cfg.tol.rank);
  out.r = out.rank_profile.r;
  out.l = out.r >= 0 ? out.n - out.r : -1;
  auto finish = [&](Verdict v, std::string why) {
    out.verdict = v;
    out.reason = std::move(why);
    return out;
  };
  for (const auto& s : out.rank_profile.per_sample)
    if (!s.immersed) return finish(Verdict::HypothesisFailure, reason::kSingularPoint);
  for (const auto& s : out.rank_profile.per_sample)
    if (!s.determined) return finish(Verdict::Undetermined, reason::kRankUndetermined);
  if (!out.rank_profile.constant) return finish(Verdict::HypothesisFailure, reason::kRankNotConstant);
  if (out.r == out.n) return finish(Verdict::NonDegenerate, "Gauss map has full rank");
  if (out.r == 1) return finish(Verdict::HypothesisFailure, reason::kRankOne);
  if (out.r < 2) return finish(Verdict::HypothesisFailure, reason::kRankRange);
  if (out.N - out.n < 2) return finish(Verdict::HypothesisFailure, reason::kCodimension);
  return finish(Verdict::Undetermined, reason::kRuledFormRequired);
}

GeneratorReport extract_generators(const RuledSpec& spec, std::span<const std::vector<Complex>> samples, double tol) {
  if (samples.empty()) throw InvalidSpec("extract_generators needs samples");
  std::vector<Eigen::MatrixXcd> spans;
  Eigen::MatrixXcd first;
  for (const auto& u : samples) {
    Eigen::MatrixXcd a(spec.N, spec.l);
    for (int k = 0; k < spec.l; ++k) a.col(k) = to_vector(spec.generators[static_cast<std::size_t>(k)].evaluate(u));
    if (first.size() == 0) first = a;
    spans.push_back(orthonormal_basis(a));
  }
  GeneratorReport out;
  for (std::size_t i = 0; i < spans.size(); ++i)
    for (std::size_t j = i + 1; j < spans.size(); ++j) out.drift = std::max(out.drift, subspace_distance(spans[i], spans[j]));
  if (out.drift > tol) throw DriftTooLarge("generator span moves by " + std::to_string(out.drift));
  Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(spec.N, spec.N);
  for (const auto& q : spans) mean += q * q.adjoint();
  mean /= static_cast<double>(spans.size());
  out.basis = dominant_subspace(mean, spec.l);
  const Eigen::MatrixXcd projected = out.basis * (out.basis.adjoint() * first);
  for (int k = 0; k < spec.l; ++k) out.generators.push_back(projected.col(k));
  return out;
}

DirectorReport director_variety(const RuledSpec& spec, std::span<const std::vector<Complex>> samples,
                                const Eigen::MatrixXcd& generator_basis, double tol_rank) {
  if (samples.empty()) throw InvalidSpec("director_variety needs samples");
  const int N = spec.N;
  const Eigen::MatrixXcd along = generator_basis * generator_basis.adjoint();
  const Eigen::MatrixXcd across = Eigen::MatrixXcd::Identity(N, N) - along;
  const Eigen::VectorXcd anchor = along * to_vector(spec.base.evaluate(samples.front()));

  ExprMap director{spec.base.vars, {}};
  for (int k = 0; k < N; ++k) {
    std::vector<Expr> terms{Expr(anchor(k))};
    for (int j = 0; j < N; ++j)
      if (across(k, j) != Complex{}) terms.push_back(Expr(across(k, j)) * spec.base.components[static_cast<std::size_t>(j)]);
    director.components.push_back(sum(terms));
  }

  DirectorReport out;
  out.dim = spec.r;
  out.rank = spec.r;
  for (const auto& u : samples) {
    const Jet2 jet = eval_jet2(director, u);
    out.points.push_back(jet.value);
    const int dim = numerical_rank(jet.d1, 1e-10).rank;
    out.dim = std::min(out.dim, dim);
    int rank = 0;
    if (dim == spec.r) {
      const TangentFrame frame = tangent_frame(jet);
      rank = gauss_rank(second_forms(jet, frame, tol_rank), tol_rank).r;
    }
    out.rank = std::min(out.rank, rank);
  }
  out.nondegenerate = out.dim == spec.r && out.rank == spec.r;
  return out;
}

VertexReport recover_vertex(const RuledSpec& spec, std::span<const std::vector<Complex>> samples, const ClassifyConfig& cfg) {
  if (samples.empty()) throw InvalidSpec("recover_vertex needs samples");
  std::vector<AmbientFlat> flats;
  for (const auto& u : samples) {
    const SampleEvidence ev = analyze_leaf(spec, u, cfg);
    if (!ev.decomposition) throw InconsistentVertex("no focal decomposition at a sample: " + ev.failure);
    if (ev.coincidence_spread > cfg.tol.coincide) throw InconsistentVertex("focal hyperplanes do not coincide");
    flats.push_back(focal_flat(*ev.leaf, common_covector(*ev.decomposition)));
  }
  return fit_vertex(flats, spec.l, cfg.tol.residual);
}

} // namespace affcyl
