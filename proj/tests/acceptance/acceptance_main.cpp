#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "affcyl/cli.hpp"
#include "affcyl/corpus.hpp"
#include "affcyl/error.hpp"
#include "affcyl/random.hpp"
#include "affcyl/serialize.hpp"

using namespace affcyl;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kCorpusSeed = 7;
constexpr int kRankSamples = 20;
constexpr int kLeafSamples = 20;

struct Outcome {
  bool pass = true;
  std::vector<std::string> log;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      log.push_back("violated: " + what);
    }
  }
  void note(const std::string& what) { log.push_back(what); }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = standard_corpus(kCorpusSeed);
  return entries;
}

ClassifyConfig config_for(const CorpusEntry& e) {
  ClassifyConfig cfg;
  cfg.seed = e.seed;
  return cfg;
}

Classification run(const CorpusEntry& e, int samples = 8) {
  return classify_document(e.spec, classify_samples(e.spec, samples, e.seed), config_for(e));
}

/// Ruled entries that satisfy every hypothesis of the pencil lemma.
bool regular_pencil_entry(const CorpusEntry& e) {
  const auto* s = std::get_if<RuledSpec>(&e.spec);
  return s && e.expected.r == s->r && s->r >= 2 && s->N - s->n() >= 2 && e.expected.m >= 2 &&
         e.expected.reason != reason::kNotDistinct;
}

std::vector<DualityPair> duality_pairs() {
  static const std::vector<DualityPair> pairs = [] {
    std::vector<DualityPair> out;
    for (std::uint64_t s = 0; s < 5; ++s) out.push_back(duality_pair(derive_seed(kCorpusSeed, 100 + s)));
    return out;
  }();
  return pairs;
}

double matched_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (auto z : a) {
    std::size_t best = 0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && std::abs(z - b[j]) < d) {
        d = std::abs(z - b[j]);
        best = j;
      }
    used[best] = true;
    worst = std::max(worst, d / (1.0 + std::abs(z)));
  }
  return worst;
}

// 1. gauss_rank equals the projector-differential oracle at 20 points per entry.
Outcome oracle_rank_equivalence() {
  Outcome out;
  int seeded = 0;
  bool has_sacksteder = false, has_plane = false, has_paraboloid = false;
  for (const auto& e : corpus()) {
    if (e.seed != 0) ++seeded;
    has_sacksteder |= e.name.rfind("sacksteder", 0) == 0;
    has_plane |= e.name == "plane";
    has_paraboloid |= e.name == "paraboloid";
    const ExprMap chart = chart_of(e.spec);
    double min_gap = std::numeric_limits<double>::infinity(), min_oracle_gap = min_gap;
    int mismatches = 0;
    for (const auto& x : sample_entry_points(e, kRankSamples, derive_seed(e.seed, 1))) {
      const Jet2 j = eval_jet2(chart, x);
      const GaussRank g = gauss_rank(second_forms(j, tangent_frame(j)));
      const BruteForceRank b = brute_force_gauss_rank(chart, x);
      if (g.r != b.rank || g.r != e.expected.r) ++mismatches;
      min_gap = std::min(min_gap, g.decision.gap_ratio);
      min_oracle_gap = std::min(min_oracle_gap, b.gap_ratio);
    }
    out.require(mismatches == 0, e.name + ": " + std::to_string(mismatches) + " rank mismatches");
    out.require(min_gap >= 1e3 && min_oracle_gap >= 1e3, e.name + ": gap ratio below 1e3");
    out.note(e.name + ": r=" + std::to_string(e.expected.r) + " at " + std::to_string(kRankSamples) +
             " points, min gap ratio forms=" + fmt(min_gap) + " oracle=" + fmt(min_oracle_gap));
  }
  out.require(seeded >= 6, "at least 6 seeded entries (" + std::to_string(seeded) + ")");
  out.require(has_sacksteder && has_plane && has_paraboloid, "Sacksteder, plane and paraboloid present");
  return out;
}

// 2. H = B C symmetric on every leaf; a 0.1 fault in one C entry is detected.
Outcome basic_equations() {
  Outcome out;
  for (const auto& e : corpus()) {
    const auto* spec = std::get_if<RuledSpec>(&e.spec);
    if (!spec) continue;
    double worst = 0.0, weakest_fault = std::numeric_limits<double>::infinity();
    for (const auto& u : sample_base_points(*spec, kLeafSamples, derive_seed(e.seed, 2))) {
      LeafData d = extract_leaf_data(*spec, u);
      worst = std::max(worst, check_basic_equations(d).residual);
      // With r = 1 every H is a 1x1 matrix, so the equations say nothing.
      if (d.l() < 1 || d.B.empty() || d.r() < 2) continue;
      // Fault goes into the C_1 entry that the equations constrain most.
      int best_p = 0, best_q = 0;
      double best = -1.0;
      for (int p = 0; p < d.r(); ++p)
        for (int q = 0; q < d.r(); ++q) {
          double w = 0.0;
          for (const auto& b : d.B)
            for (int i = 0; i < d.r(); ++i)
              if (i != q) w = std::max(w, std::abs(b(i, p)));
          if (w > best) {
            best = w;
            best_p = p;
            best_q = q;
          }
        }
      LeafData bad = d;
      bad.C[1](best_p, best_q) += 0.1;
      refresh_products(bad);
      weakest_fault = std::min(weakest_fault, check_basic_equations(bad).residual);
    }
    out.require(worst <= 1e-8, e.name + ": symmetry residual " + fmt(worst));
    if (std::isfinite(weakest_fault)) out.require(weakest_fault > 1e-3, e.name + ": fault residual " + fmt(weakest_fault));
    out.note(e.name + ": residual " + fmt(worst) +
             (std::isfinite(weakest_fault) ? ", injected fault residual >= " + fmt(weakest_fault) : ", r = 1 so no fault test"));
  }
  return out;
}

// 3 and 4 share the per-leaf pencil work.
struct PencilStats {
  Outcome distinct, factor;
};

PencilStats pencil_criteria() {
  PencilStats out;
  for (const auto& e : corpus()) {
    if (!regular_pencil_entry(e)) continue;
    const auto& spec = std::get<RuledSpec>(e.spec);
    const auto cfg = config_for(e);
    double min_gap = std::numeric_limits<double>::infinity(), off = 0.0, prod = 0.0;
    bool all_distinct = true, counts_ok = true;
    for (const auto& u : sample_base_points(spec, kLeafSamples, derive_seed(e.seed, 3))) {
      const LeafData d = extract_leaf_data(spec, u);
      try {
        const auto pa = select_regular_pair(leaf_forms(d), cfg.seed, cfg.tol.gap, cfg.pencil_budget);
        all_distinct &= pa.distinct;
        min_gap = std::min(min_gap, pa.min_gap);
        off = std::max(off, simultaneous_diagonalize(pa, d).off_diag_residual);
        const auto dec = factor_focal(d, pa, 1.0);
        prod = std::max(prod, dec.residual);
        counts_ok &= static_cast<int>(dec.hyperplanes.size()) == spec.r;
      } catch (const Error& ex) {
        all_distinct = false;
        out.distinct.note(e.name + ": " + ex.what());
      }
    }
    out.distinct.require(all_distinct, e.name + ": pencil not distinct at some leaf");
    out.distinct.require(off <= 1e-8, e.name + ": off-diagonal residual " + fmt(off));
    out.distinct.note(e.name + ": min eigenvalue gap " + fmt(min_gap) + ", off-diagonal residual " + fmt(off));
    out.factor.require(prod <= 1e-8, e.name + ": product residual " + fmt(prod));
    out.factor.require(counts_ok, e.name + ": factor count differs from r");
    out.factor.note(e.name + ": " + std::to_string(spec.r) + " factors, relative coefficient error " + fmt(prod));
  }
  return out;
}

// 5. Cylinders: verdict, generator span, director.
Outcome cylinders() {
  Outcome out;
  std::vector<CorpusEntry> cyl;
  for (const auto& e : corpus())
    if (e.expected.verdict == Verdict::Cylinder) cyl.push_back(e);
  for (std::uint64_t s = 1; s <= 3; ++s) cyl.push_back(random_cylinder(derive_seed(kCorpusSeed, 200 + s)));
  for (const auto& p : duality_pairs()) {
    cyl.push_back(p.cylinder);
    cyl.push_back(p.cylinder_from_cone);
  }
  bool saw_veronese = false;
  for (const auto& e : cyl) {
    const auto c = run(e);
    saw_veronese |= e.name == "veronese_cylinder" && c.n == 4 && c.r == 2 && c.l == 2 && c.N == 6;
    out.require(c.verdict == Verdict::Cylinder, e.name + ": verdict " + to_string(c.verdict));
    if (c.verdict != Verdict::Cylinder) continue;
    const double d = subspace_distance(*e.expected.generators, c.generators->basis);
    out.require(d <= 1e-8, e.name + ": generator span distance " + fmt(d));
    out.require(c.director->dim == c.r && c.director->rank == c.r, e.name + ": director dim/rank");
    out.note(e.name + ": Cylinder, span distance " + fmt(d) + ", director dim=" + std::to_string(c.director->dim) +
             " rank=" + std::to_string(c.director->rank));
  }
  out.require(saw_veronese, "Veronese-type cylinder with n=4, r=2, l=2, N=6");
  return out;
}

// 6. Cones: verdict, vertex flat, duality swaps.
Outcome cones() {
  Outcome out;
  std::vector<CorpusEntry> cone;
  for (const auto& e : corpus())
    if (e.expected.verdict == Verdict::Cone) cone.push_back(e);
  for (std::uint64_t s = 1; s <= 3; ++s) cone.push_back(random_cone(derive_seed(kCorpusSeed, 300 + s)));
  for (const auto& e : cone) {
    const auto c = run(e);
    out.require(c.verdict == Verdict::Cone, e.name + ": verdict " + to_string(c.verdict));
    if (c.verdict != Verdict::Cone) continue;
    out.require(c.vertex.has_value(), e.name + ": no vertex recovered");
    if (!c.vertex) continue;
    const double d = flat_distance(*e.expected.vertex, c.vertex->flat);
    out.require(d <= 1e-8, e.name + ": vertex distance " + fmt(d));
    out.note(e.name + ": Cone, vertex distance " + fmt(d));
  }
  int pair_index = 0;
  for (const auto& p : duality_pairs()) {
    const Verdict a = run(p.cone).verdict, b = run(p.cylinder_from_cone).verdict;
    const Verdict c = run(p.cylinder).verdict, d = run(p.cone_from_cylinder).verdict;
    const bool ok = a == Verdict::Cone && b == Verdict::Cylinder && c == Verdict::Cylinder && d == Verdict::Cone;
    out.require(ok, "duality pair " + std::to_string(pair_index));
    out.note("duality pair " + std::to_string(pair_index) + ": " + to_string(a) + " -> " + to_string(b) + ", " +
             to_string(c) + " -> " + to_string(d));
    ++pair_index;
  }
  return out;
}

// 7. The Sacksteder hypersurface.
Outcome sacksteder_behavior() {
  Outcome out;
  const auto e = sacksteder();
  const auto c = run(e);
  out.require(c.r == 2 && e.expected.r == 2, "r = 2 (classify " + std::to_string(c.r) + ")");
  out.require(c.verdict == Verdict::HypothesisFailure && c.reason == reason::kCodimension,
              "HypothesisFailure(N - n >= 2), got " + to_string(c.verdict) + " (" + c.reason + ")");
  out.require(c.verdict != Verdict::Cylinder, "verdict is not Cylinder");

  const auto& spec = std::get<RuledSpec>(e.spec);
  bool conjugate_pair = true, affine_part = true;
  for (const auto& u : sample_base_points(spec, 5, 17)) {
    const LeafData d = extract_leaf_data(spec, u);
    const auto J = focal_polynomial(d);
    const auto roots = affine_focal_roots(J);
    const bool pair = roots.size() == 2 && std::abs(roots[0].imag()) > 1e-8 && std::abs(roots[0] - std::conj(roots[1])) < 1e-8;
    conjugate_pair &= pair;
    // Covectors (1, c) with J = prod (x0 + c x1): c = -1/t for finite roots, 0 for roots at infinity.
    std::vector<Complex> cs;
    for (auto t : roots) cs.push_back(-1.0 / t);
    while (cs.size() < 2) cs.emplace_back(0.0);
    double affine = 0.0;
    for (auto z : cs) affine = std::max(affine, std::abs(z));
    affine_part &= affine > 1e-8;
    std::ostringstream os;
    os << "leaf u=(" << fmt(u[0].real()) << ", " << fmt(u[1].real()) << "): J(x0,x1) coefficients";
    for (auto z : J.poly.coeffs()) os << " " << fmt(z.real()) << (z.imag() != 0.0 ? "+" + fmt(z.imag()) + "i" : "");
    os << ", " << roots.size() << " finite roots, max |c| = " << fmt(affine);
    out.note(os.str());
  }
  out.require(conjugate_pair, "focal roots on sampled leaves form a nonreal conjugate pair");
  out.require(affine_part, "focal covectors have nonzero affine part");
  return out;
}

// 8. Repeated pencil roots never yield a Cylinder/Cone verdict.
Outcome repeated_roots() {
  Outcome out;
  const auto e = degenerate_pencil();
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    ClassifyConfig cfg;
    cfg.seed = seed;
    const auto c = classify_document(e.spec, classify_samples(e.spec, 8, seed), cfg);
    out.require(c.verdict == Verdict::HypothesisFailure && c.reason == reason::kNotDistinct,
                "seed " + std::to_string(seed) + ": " + to_string(c.verdict) + " (" + c.reason + ")");
  }
  const auto& spec = std::get<RuledSpec>(e.spec);
  const LeafData d = extract_leaf_data(spec, std::vector<Complex>{0.2, -0.1});
  const Eigen::MatrixXcd bp = d.B[0] + d.B[1];
  const auto pa = analyze_pair(bp, 2.0 * bp);
  out.require(!pa.distinct, "pencil (B', 2B') reported distinct");
  bool refused = false;
  try {
    simultaneous_diagonalize(pa, d);
  } catch (const HypothesisNotMet&) {
    refused = true;
  }
  out.require(refused, "diagonalization accepted a repeated-root pencil");
  out.note("degenerate_pencil: HypothesisFailure on distinctness for 4 seeds; (B', 2B') roots " +
           fmt(pa.eigenvalues[0].real()) + ", " + fmt(pa.eigenvalues[1].real()));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// 9. Byte-identical reports across runs; exact spec round trip.
Outcome determinism() {
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / "affcyl_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const auto& e : corpus()) {
    const fs::path spec = dir / (e.name + ".json");
    std::ofstream(spec) << dump(to_json(e.spec));
    const auto back = spec_from_json(nlohmann::json::parse(slurp(spec)));
    out.require(dump(to_json(back)) == slurp(spec), e.name + ": spec JSON round trip");
    const ExprMap a = chart_of(e.spec), b = chart_of(back);
    for (const auto& x : sample_entry_points(e, 3, 5)) out.require(a.evaluate(x) == b.evaluate(x), e.name + ": evaluation after round trip");
    std::string reports[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path report = dir / (e.name + ".report" + std::to_string(k) + ".json");
      const std::string cmd = std::string(AFFCYL_TOOL) + " analyze --seed 11 -o " + report.string() + " " + spec.string();
      const int status = std::system(cmd.c_str());
      out.require(WIFEXITED(status) && WEXITSTATUS(status) != kExitParse, e.name + ": analyze failed");
      reports[k] = slurp(report);
    }
    out.require(!reports[0].empty() && reports[0] == reports[1], e.name + ": reports differ");
  }
  out.note(std::to_string(corpus().size()) + " specs round-tripped; analyze run twice per spec in separate processes");
  const fs::path g1 = dir / "gen1", g2 = dir / "gen2";
  cmd_corpus_gen(kCorpusSeed, g1);
  cmd_corpus_gen(kCorpusSeed, g2);
  for (const auto& f : fs::directory_iterator(g1)) out.require(slurp(f.path()) == slurp(g2 / f.path().filename()), "corpus file " + f.path().filename().string());
  fs::remove_all(dir);
  return out;
}

// 10. Invariance under ambient affine maps and base congruences.
Outcome invariance() {
  Outcome out;
  int checked_eigen = 0;
  double worst_eigen = 0.0;
  for (const auto& e : corpus()) {
    const auto base = run(e);
    for (std::uint64_t k = 0; k < 10; ++k) {
      const auto [M, b] = random_affine_map(derive_seed(e.seed ^ 0xAFF1, k), std::visit([](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, RuledSpec>) return s.N;
        else return s.map.n_out();
      }, e.spec));
      const auto moved = run(affine_transform(e, M, b));
      const bool same = moved.verdict == base.verdict && moved.r == base.r && moved.l == base.l && moved.m == base.m;
      out.require(same, e.name + ": affine map " + std::to_string(k) + " changed verdict/ranks (" + to_string(moved.verdict) + ")");
    }
    const auto* spec = std::get_if<RuledSpec>(&e.spec);
    if (!spec) continue;
    SeededRng rng(derive_seed(e.seed, 0xC0));
    const auto us = sample_base_points(*spec, 8, e.seed);
    for (int k = 0; k < 10; ++k) {
      Eigen::MatrixXd S;
      do {
        S = Eigen::MatrixXd::Identity(spec->r, spec->r);
        for (int i = 0; i < spec->r; ++i)
          for (int j = 0; j < spec->r; ++j) S(i, j) += 0.3 * rng.uniform(-1.0, 1.0);
      } while (condition_number(S.cast<Complex>()) > 100.0);
      Eigen::VectorXd c(spec->r);
      for (int i = 0; i < spec->r; ++i) c(i) = rng.uniform(-0.05, 0.05);
      const RuledSpec re = base_reparametrize(*spec, S, c);
      std::vector<std::vector<Complex>> vs;
      for (const auto& u : us) {
        Eigen::VectorXd uu(spec->r);
        for (int i = 0; i < spec->r; ++i) uu(i) = u[static_cast<std::size_t>(i)].real();
        const Eigen::VectorXd v = S.lu().solve(uu - c);
        vs.emplace_back(v.data(), v.data() + v.size());
      }
      const auto a = classify(*spec, us, config_for(e));
      const auto bcl = classify(re, vs, config_for(e));
      out.require(a.verdict == bcl.verdict && a.r == bcl.r && a.m == bcl.m,
                  e.name + ": congruence " + std::to_string(k) + " changed verdict/ranks");
      for (std::size_t s = 0; s < a.samples.size() && s < bcl.samples.size(); ++s) {
        if (!a.samples[s].pencil || !bcl.samples[s].pencil) {
          out.require(a.samples[s].pencil.has_value() == bcl.samples[s].pencil.has_value(),
                      e.name + ": pencil presence changed under congruence");
          continue;
        }
        const double d = matched_distance(a.samples[s].pencil->eigenvalues, bcl.samples[s].pencil->eigenvalues);
        worst_eigen = std::max(worst_eigen, d);
        ++checked_eigen;
      }
    }
  }
  // Direct congruence on the pencil pair.
  SeededRng rng(99);
  for (int k = 0; k < 10; ++k) {
    Eigen::MatrixXcd bp(3, 3), bpp(3, 3), S(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        bp(i, j) = bp(j, i) = rng.uniform(-1.0, 1.0) + (i == j ? 3.0 : 0.0);
        bpp(i, j) = bpp(j, i) = rng.uniform(-1.0, 1.0);
      }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) S(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * rng.uniform(-1.0, 1.0);
    const double d = matched_distance(analyze_pair(bp, bpp).eigenvalues,
                                      analyze_pair(S.transpose() * bp * S, S.transpose() * bpp * S).eigenvalues);
    worst_eigen = std::max(worst_eigen, d);
    ++checked_eigen;
  }
  out.require(worst_eigen <= 1e-8, "eigenvalue drift " + fmt(worst_eigen));
  out.note(std::to_string(corpus().size()) + " entries x 10 affine maps; " + std::to_string(checked_eigen) +
           " eigenvalue comparisons, worst relative drift " + fmt(worst_eigen));
  return out;
}

} // namespace

int main(int argc, char** argv) {
  const bool verbose = argc > 1 && std::string(argv[1]) == "-v";
  const auto pencil = pencil_criteria();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 oracle rank equivalence", oracle_rank_equivalence},
      {"2 basic equations and fault injection", basic_equations},
      {"3 distinct pencil roots and simultaneous diagonalization", [&] { return pencil.distinct; }},
      {"4 focal polynomial factors into r hyperplanes", [&] { return pencil.factor; }},
      {"5 cylinders end to end", cylinders},
      {"6 cones end to end and projective duality", cones},
      {"7 Sacksteder hypersurface", sacksteder_behavior},
      {"8 repeated pencil roots give HypothesisFailure", repeated_roots},
      {"9 determinism and spec round trip", determinism},
      {"10 invariance under affine maps and congruences", invariance},
  };
  int failures = 0;
  for (const auto& [title, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.log.push_back(std::string("exception: ") + ex.what());
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << "[" << title << "]\n";
    for (const auto& line : o.log)
      if (verbose || line.rfind("violated", 0) == 0 || line.rfind("exception", 0) == 0) std::cout << "    " << line << '\n';
    if (!o.pass) ++failures;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
