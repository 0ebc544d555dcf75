#include "affcyl/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "affcyl/error.hpp"
#include "affcyl/random.hpp"
#include "affcyl/serialize.hpp"

namespace affcyl {

namespace {

constexpr int kRegularBudget = 256;
constexpr double kRegularGap = 1e-3;
constexpr int kProbeSamples = 8;

bool is_zero(const Expr& e) { return e.op() == Op::Const && e.value() == Complex{}; }

Expr lin(const Eigen::MatrixXcd& M, Eigen::Index row, const std::vector<Expr>& xs, Complex shift) {
  std::vector<Expr> terms;
  if (shift != Complex{}) terms.emplace_back(shift);
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    const Complex c = M(row, j);
    const Expr& x = xs[static_cast<std::size_t>(j)];
    if (c == Complex{} || is_zero(x)) continue;
    terms.push_back(c == Complex{1.0, 0.0} ? x : Expr(c) * x);
  }
  if (terms.size() == 1) return terms.front();
  return sum(terms);
}

ExprMap affine_image(const ExprMap& map, const Eigen::MatrixXcd& M, const Eigen::VectorXcd& b) {
  ExprMap out{map.vars, {}};
  for (Eigen::Index k = 0; k < M.rows(); ++k) out.components.push_back(lin(M, k, map.components, b.size() ? b(k) : Complex{}));
  return out;
}

ExprMap constant_map(const std::vector<std::string>& vars, const Eigen::VectorXcd& v) {
  ExprMap out{vars, {}};
  for (Eigen::Index k = 0; k < v.size(); ++k) out.components.emplace_back(v(k));
  return out;
}

Eigen::VectorXcd unit(int N, int k) {
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(N);
  e(k) = 1.0;
  return e;
}

AmbientFlat normalized_flat(const Eigen::VectorXcd& point, const Eigen::MatrixXcd& dirs) {
  const Eigen::MatrixXcd q = orthonormal_basis(dirs);
  return {point - q * (q.adjoint() * point), q, false};
}

Expr random_quadratic(SeededRng& rng, const Expr& u, const Expr& v) {
  std::vector<Expr> terms;
  const Expr monos[] = {u * u, u * v, v * v, u, v};
  for (const auto& m : monos) terms.push_back(Expr(rng.uniform(-1.0, 1.0)) * m);
  return sum(terms);
}

Expr cubic(const Expr& s, const Eigen::Vector4d& c) {
  std::vector<Expr> terms{Expr(c(0)), Expr(c(1)) * s, Expr(c(2)) * pow(s, 2), Expr(c(3)) * pow(s, 3)};
  return sum(terms);
}

/// Expected verdict for a construction whose leaves are known, given the
/// oracle rank.
void screen_expected(Expected& e, int n, int N, Verdict constructed, const std::string& constructed_reason) {
  if (e.r == n) {
    e.verdict = Verdict::NonDegenerate;
    e.reason = "Gauss map has full rank";
  } else if (e.r == 1) {
    e.verdict = Verdict::HypothesisFailure;
    e.reason = reason::kRankOne;
  } else if (e.r < 2) {
    e.verdict = Verdict::HypothesisFailure;
    e.reason = reason::kRankRange;
  } else if (N - n < 2) {
    e.verdict = Verdict::HypothesisFailure;
    e.reason = reason::kCodimension;
  } else {
    e.verdict = constructed;
    e.reason = constructed_reason;
    e.source["verdict"] = "construction";
    return;
  }
  e.source["verdict"] = "hypothesis screen on oracle rank";
}

std::vector<Complex> probe_point(const CorpusEntry& entry) {
  return classify_samples(entry.spec, 1, derive_seed(entry.seed, 0x70))[0];
}

void fill_oracle_fields(CorpusEntry& entry) {
  const ExprMap chart = chart_of(entry.spec);
  std::vector<Complex> x;
  if (const auto* rs = std::get_if<RuledSpec>(&entry.spec)) {
    const std::vector<Complex> t(static_cast<std::size_t>(rs->l));
    x = chart_point(t, probe_point(entry));
  } else {
    x = probe_point(entry);
  }
  entry.expected.r = brute_force_gauss_rank(chart, x).rank;
  entry.expected.m = brute_force_form_count(chart, x);
  entry.expected.source["r"] = "brute-force projector oracle";
  entry.expected.source["m"] = "finite-difference osculating dimension";
}

RuledSpec ruled(std::string name, int r, int l, int N, ExprMap base, std::vector<ExprMap> gens, std::vector<Interval> domain) {
  RuledSpec s;
  s.name = std::move(name);
  s.r = r;
  s.l = l;
  s.N = N;
  s.base = std::move(base);
  s.generators = std::move(gens);
  s.domain = effective_domain(domain, r);
  s.validate();
  return s;
}

} // namespace

ExprMap chart_of(const SpecDocument& doc) {
  if (const auto* rs = std::get_if<RuledSpec>(&doc)) return full_chart(*rs);
  return std::get<ChartSpec>(doc).map;
}

std::vector<std::vector<Complex>> classify_samples(const SpecDocument& doc, int count, std::uint64_t seed) {
  if (const auto* rs = std::get_if<RuledSpec>(&doc)) return sample_base_points(*rs, count, seed);
  return sample_chart_points(std::get<ChartSpec>(doc), count, seed);
}

Classification classify_document(const SpecDocument& doc, std::span<const std::vector<Complex>> samples,
                                 const ClassifyConfig& cfg) {
  if (const auto* rs = std::get_if<RuledSpec>(&doc)) return classify(*rs, samples, cfg);
  return classify(std::get<ChartSpec>(doc), samples, cfg);
}

std::vector<std::vector<Complex>> sample_entry_points(const CorpusEntry& entry, int count, std::uint64_t seed, double t_max) {
  auto base = classify_samples(entry.spec, count, seed);
  const auto* rs = std::get_if<RuledSpec>(&entry.spec);
  if (!rs) return base;
  SeededRng rng(derive_seed(seed, 0x7));
  std::vector<std::vector<Complex>> out;
  for (const auto& u : base) {
    std::vector<Complex> t;
    for (int a = 0; a < rs->l; ++a) t.emplace_back(rng.uniform(-t_max, t_max), 0.0);
    out.push_back(chart_point(t, u));
  }
  return out;
}

CorpusEntry make_cylinder(std::string name, const ExprMap& director, const std::vector<Eigen::VectorXcd>& generator_dirs,
                          std::uint64_t seed, std::vector<Interval> domain) {
  director.validate();
  const int r = director.n_params(), N = director.n_out(), l = static_cast<int>(generator_dirs.size());
  Eigen::MatrixXcd G(N, l);
  for (int a = 0; a < l; ++a) {
    if (generator_dirs[static_cast<std::size_t>(a)].size() != N) throw InvalidSpec("generator direction has wrong length");
    G.col(a) = generator_dirs[static_cast<std::size_t>(a)];
  }
  std::vector<ExprMap> gens;
  for (int a = 0; a < l; ++a) gens.push_back(constant_map(director.vars, G.col(a)));
  CorpusEntry entry{name, seed, ruled(name, r, l, N, director, std::move(gens), std::move(domain)), {}};
  const auto& spec = std::get<RuledSpec>(entry.spec);
  for (const auto& u : sample_base_points(spec, kProbeSamples, seed)) {
    Eigen::MatrixXcd T(N, r + l);
    T << eval_jet2(director, u).d1, G;
    if (numerical_rank(T, 1e-10).rank < r + l)
      throw DependentGenerators("generator directions meet the director's tangent space in '" + name + "'");
  }
  entry.expected.l = l;
  entry.expected.generators = orthonormal_basis(G);
  entry.expected.source["l"] = "construction";
  entry.expected.source["generators"] = "construction";
  fill_oracle_fields(entry);
  screen_expected(entry.expected, r + l, N, Verdict::Cylinder, "all focal hyperplanes lie at infinity");
  return entry;
}

CorpusEntry make_cone(std::string name, const Eigen::VectorXcd& vertex_point, const Eigen::MatrixXcd& vertex_dirs,
                      const ExprMap& director, std::uint64_t seed, std::vector<Interval> domain) {
  director.validate();
  const int r = director.n_params(), N = director.n_out(), l = static_cast<int>(vertex_dirs.cols()) + 1;
  if (vertex_point.size() != N || vertex_dirs.rows() != N) throw InvalidSpec("vertex flat has wrong dimension");
  std::vector<ExprMap> gens;
  for (int a = 0; a + 1 < l; ++a) gens.push_back(constant_map(director.vars, vertex_dirs.col(a)));
  ExprMap last{director.vars, {}};
  for (int k = 0; k < N; ++k) last.components.push_back(Expr(vertex_point(k)) - director.components[static_cast<std::size_t>(k)]);
  gens.push_back(std::move(last));
  CorpusEntry entry{name, seed, ruled(name, r, l, N, director, std::move(gens), std::move(domain)), {}};
  const auto& spec = std::get<RuledSpec>(entry.spec);
  const ExprMap chart = full_chart(spec);
  const std::vector<Complex> t(static_cast<std::size_t>(l));
  for (const auto& u : sample_base_points(spec, kProbeSamples, seed))
    if (numerical_rank(eval_jet2(chart, chart_point(t, u)).d1, 1e-10).rank < r + l)
      throw DegenerateJoin("director meets the vertex flat or is not immersed in '" + name + "'");
  entry.expected.l = l;
  entry.expected.vertex = normalized_flat(vertex_point, vertex_dirs);
  entry.expected.source["l"] = "construction";
  entry.expected.source["vertex"] = "construction";
  fill_oracle_fields(entry);
  screen_expected(entry.expected, r + l, N, Verdict::Cone, "focal hyperplanes coincide in a finite hyperplane");
  return entry;
}

CorpusEntry sacksteder() {
  const Expr w = Expr::var(0), u = Expr::var(1);
  ExprMap base{{"w", "u"}, {-(w * sin(u)), w * cos(u), u, Expr(0.0)}};
  ExprMap gen{{"w", "u"}, {cos(u), sin(u), Expr(0.0), Expr(1.0)}};
  CorpusEntry entry{"sacksteder", 0, ruled("sacksteder", 2, 1, 4, base, {gen}, {{-0.5, 0.5}, {-0.5, 0.5}}), {}};
  entry.expected.l = 1;
  entry.expected.source["l"] = "construction";
  fill_oracle_fields(entry);
  screen_expected(entry.expected, 3, 4, Verdict::Undetermined, reason::kNoCriterion);
  return entry;
}

CorpusEntry sacksteder_chart() {
  const Expr x1 = Expr::var(0), x2 = Expr::var(1), x3 = Expr::var(2);
  ChartSpec c{"sacksteder_chart", {{"x1", "x2", "x3"}, {x1, x2, x3, x1 * cos(x3) + x2 * sin(x3)}}, {}};
  c.domain = effective_domain({}, 3);
  CorpusEntry entry{c.name, 0, c, {}};
  fill_oracle_fields(entry);
  entry.expected.l = 3 - entry.expected.r;
  entry.expected.source["l"] = "n - oracle rank";
  screen_expected(entry.expected, 3, 4, Verdict::Undetermined, reason::kRuledFormRequired);
  return entry;
}

CorpusEntry random_regular_example(std::uint64_t seed, int r, int l, int N) {
  if (r < 1 || N < r + l + 2) throw InvalidSpec("random_regular_example needs N >= r + l + 2");
  if (l < r - 1) throw InvalidSpec("random_regular_example needs l >= r - 1");
  const std::string name = "random_regular_r" + std::to_string(r) + "_l" + std::to_string(l) + "_N" + std::to_string(N) +
                           "_s" + std::to_string(seed);
  SeededRng rng(seed);
  const auto vars = numbered_vars("u", r);
  for (int attempt = 0; attempt < kRegularBudget; ++attempt) {
    std::vector<std::vector<Expr>> curves(static_cast<std::size_t>(r));
    for (int p = 0; p < r; ++p)
      for (int k = 0; k < N; ++k) {
        Eigen::Vector4d c;
        for (int d = 0; d < 4; ++d) c(d) = rng.uniform(-1.0, 1.0);
        curves[static_cast<std::size_t>(p)].push_back(cubic(Expr::var(p), c));
      }
    ExprMap base{vars, {}};
    for (int k = 0; k < N; ++k) {
      std::vector<Expr> terms;
      for (int p = 0; p < r; ++p) terms.push_back(curves[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)]);
      base.components.push_back(Expr(1.0 / r) * sum(terms));
    }
    std::vector<ExprMap> gens;
    for (int a = 1; a < r; ++a) {
      ExprMap g{vars, {}};
      for (int k = 0; k < N; ++k)
        g.components.push_back(curves[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)] - curves[0][static_cast<std::size_t>(k)]);
      gens.push_back(std::move(g));
    }
    for (int a = r - 1; a < l; ++a) {
      Eigen::VectorXcd v(N);
      for (int k = 0; k < N; ++k) v(k) = rng.uniform(-1.0, 1.0);
      gens.push_back(constant_map(vars, v));
    }
    CorpusEntry entry{name, seed, ruled(name, r, l, N, base, gens, {}), {}};
    const auto& spec = std::get<RuledSpec>(entry.spec);
    bool ok = true;
    try {
      std::vector<std::vector<Complex>> probes{probe_point(entry)};
      for (auto& u : sample_base_points(spec, kProbeSamples, seed)) probes.push_back(std::move(u));
      for (const auto& u : probes) {
        const LeafData leaf = extract_leaf_data(spec, u);
        if (leaf.m < 2 || !check_basic_equations(leaf).pass) {
          ok = false;
          break;
        }
        const PencilAnalysis pa = select_regular_pair(leaf_forms(leaf), seed, kRegularGap);
        if (pa.min_gap <= kRegularGap * 2.0) { // keep a margin above the rejection gap
          ok = false;
          break;
        }
      }
      if (ok) {
        fill_oracle_fields(entry);
        ok = entry.expected.r == r;
      }
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) continue;
    entry.expected.l = l;
    entry.expected.source["l"] = "construction";
    screen_expected(entry.expected, r + l, N, Verdict::Undetermined, reason::kNoCriterion);
    return entry;
  }
  throw BudgetExceeded("no regular example after " + std::to_string(kRegularBudget) + " draws");
}

CorpusEntry veronese_cylinder() {
  const Expr u = Expr::var(0), v = Expr::var(1);
  ExprMap director{{"u", "v"}, {u, v, u * u + v * v, u * v, Expr(0.0), Expr(0.0)}};
  return make_cylinder("veronese_cylinder", director, {unit(6, 4), unit(6, 5)}, 0);
}

CorpusEntry veronese_cone() {
  const Expr u = Expr::var(0), v = Expr::var(1);
  ExprMap director{{"u", "v"}, {u, v, u * u + v * v, u * v, Expr(1.0), Expr(0.0)}};
  Eigen::MatrixXcd dirs = unit(6, 5);
  return make_cone("veronese_cone", Eigen::VectorXcd::Zero(6), dirs, director, 0);
}

CorpusEntry random_cylinder(std::uint64_t seed) {
  SeededRng rng(seed);
  const Expr u = Expr::var(0), v = Expr::var(1);
  ExprMap director{{"u", "v"}, {u, v, random_quadratic(rng, u, v), random_quadratic(rng, u, v), Expr(0.0), Expr(0.0)}};
  std::vector<Eigen::VectorXcd> dirs;
  for (int a = 0; a < 2; ++a) {
    Eigen::VectorXcd g(6);
    for (int k = 0; k < 6; ++k) g(k) = rng.uniform(-1.0, 1.0);
    g(4 + a) += 2.0;
    dirs.push_back(g);
  }
  auto entry = make_cylinder("random_cylinder_s" + std::to_string(seed), director, dirs, seed);
  auto [M, b] = random_affine_map(derive_seed(seed, 1), 6);
  return affine_transform(entry, M, b);
}

CorpusEntry random_cone(std::uint64_t seed) {
  SeededRng rng(seed);
  const Expr u = Expr::var(0), v = Expr::var(1);
  ExprMap director{{"u", "v"}, {u, v, random_quadratic(rng, u, v), random_quadratic(rng, u, v), Expr(1.0), Expr(0.0)}};
  Eigen::MatrixXcd dirs = unit(6, 5);
  auto entry = make_cone("random_cone_s" + std::to_string(seed), Eigen::VectorXcd::Zero(6), dirs, director, seed);
  auto [M, b] = random_affine_map(derive_seed(seed, 1), 6);
  return affine_transform(entry, M, b);
}

CorpusEntry curve_cylinder() {
  const Expr u = Expr::var(0);
  ExprMap director{{"u"}, {u, u * u, pow(u, 3), Expr(0.0), Expr(0.0)}};
  return make_cylinder("curve_cylinder", director, {unit(5, 3), unit(5, 4)}, 0);
}

CorpusEntry degenerate_pencil() {
  const Expr u = Expr::var(0), v = Expr::var(1);
  ExprMap director{{"u", "v"}, {u, v, u * u, Expr(2.0) * u * u, u * v, Expr(0.0), Expr(0.0)}};
  auto entry = make_cylinder("degenerate_pencil", director, {unit(7, 5), unit(7, 6)}, 0);
  if (entry.expected.verdict == Verdict::Cylinder) {
    entry.expected.verdict = Verdict::HypothesisFailure;
    entry.expected.reason = reason::kNotDistinct;
    entry.expected.source["verdict"] = "construction: the forms span diag(1, 0) and the swap form";
  }
  entry.expected.generators.reset();
  return entry;
}

CorpusEntry plane() {
  const Expr u = Expr::var(0), v = Expr::var(1);
  ChartSpec c{"plane", {{"u", "v"}, {u, v, u + Expr(2.0) * v + Expr(1.0)}}, effective_domain({}, 2)};
  CorpusEntry entry{c.name, 0, c, {}};
  fill_oracle_fields(entry);
  entry.expected.l = 2 - entry.expected.r;
  entry.expected.source["l"] = "n - oracle rank";
  screen_expected(entry.expected, 2, 3, Verdict::Undetermined, reason::kRuledFormRequired);
  return entry;
}

CorpusEntry paraboloid() {
  const Expr u = Expr::var(0), v = Expr::var(1);
  ChartSpec c{"paraboloid", {{"u", "v"}, {u, v, u * u + v * v}}, effective_domain({}, 2)};
  CorpusEntry entry{c.name, 0, c, {}};
  fill_oracle_fields(entry);
  entry.expected.l = 2 - entry.expected.r;
  entry.expected.source["l"] = "n - oracle rank";
  screen_expected(entry.expected, 2, 3, Verdict::Undetermined, reason::kRuledFormRequired);
  return entry;
}

RuledSpec projective_transform(const RuledSpec& spec, const Eigen::MatrixXd& P) {
  const int N = spec.N;
  if (P.rows() != N + 1 || P.cols() != N + 1) throw InvalidSpec("projective map must be (N+1) x (N+1)");
  const Eigen::MatrixXcd Pc = P.cast<Complex>();
  // Homogeneous images: X_0 = P (1, A_0), X_a = P (0, A_a); coordinate 0 is the weight.
  auto image = [&](const ExprMap& a, bool is_point) {
    std::vector<Expr> xs{Expr(is_point ? 1.0 : 0.0)};
    xs.insert(xs.end(), a.components.begin(), a.components.end());
    std::vector<Expr> out;
    for (int k = 0; k <= N; ++k) out.push_back(lin(Pc, k, xs, {}));
    return out;
  };
  const auto X0 = image(spec.base, true);
  RuledSpec out = spec;
  out.name = spec.name + "_projective";
  out.base.components.clear();
  for (int k = 1; k <= N; ++k) out.base.components.push_back(X0[static_cast<std::size_t>(k)] / X0[0]);
  for (int a = 0; a < spec.l; ++a) {
    const auto Xa = image(spec.generators[static_cast<std::size_t>(a)], false);
    ExprMap& g = out.generators[static_cast<std::size_t>(a)];
    g.components.clear();
    for (int k = 1; k <= N; ++k) {
      const Expr& xk = Xa[static_cast<std::size_t>(k)];
      if (is_zero(Xa[0])) {
        g.components.push_back(xk);
      } else {
        g.components.push_back(xk - Xa[0] / X0[0] * X0[static_cast<std::size_t>(k)]);
      }
    }
  }
  out.validate();
  return out;
}

CorpusEntry affine_transform(const CorpusEntry& entry, const Eigen::MatrixXd& M, const Eigen::VectorXd& b) {
  const Eigen::MatrixXcd Mc = M.cast<Complex>();
  const Eigen::VectorXcd bc = b.cast<Complex>();
  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(b.size());
  CorpusEntry out = entry;
  if (auto* rs = std::get_if<RuledSpec>(&out.spec)) {
    rs->base = affine_image(rs->base, Mc, bc);
    for (auto& g : rs->generators) g = affine_image(g, Mc, zero);
  } else {
    auto& cs = std::get<ChartSpec>(out.spec);
    cs.map = affine_image(cs.map, Mc, bc);
  }
  if (out.expected.generators) out.expected.generators = orthonormal_basis(Mc * *out.expected.generators);
  if (out.expected.vertex)
    out.expected.vertex = normalized_flat(Mc * out.expected.vertex->point + bc, Mc * out.expected.vertex->directions);
  return out;
}

RuledSpec base_reparametrize(const RuledSpec& spec, const Eigen::MatrixXd& S, const Eigen::VectorXd& c) {
  if (S.rows() != spec.r || S.cols() != spec.r || c.size() != spec.r) throw InvalidSpec("reparametrization has wrong size");
  std::vector<Expr> vars;
  for (int i = 0; i < spec.r; ++i) vars.push_back(Expr::var(i));
  std::vector<Expr> repl;
  for (int i = 0; i < spec.r; ++i) repl.push_back(lin(S.cast<Complex>(), i, vars, Complex(c(i), 0.0)));
  auto apply = [&](ExprMap m) {
    for (auto& e : m.components) e = substitute(e, repl);
    return m;
  };
  RuledSpec out = spec;
  out.base = apply(spec.base);
  for (auto& g : out.generators) g = apply(g);
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> random_affine_map(std::uint64_t seed, int N) {
  SeededRng rng(seed);
  for (;;) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) M(i, j) += 0.4 * rng.uniform(-1.0, 1.0);
    Eigen::VectorXd b(N);
    for (int i = 0; i < N; ++i) b(i) = rng.uniform(-1.0, 1.0);
    if (condition_number(M.cast<Complex>()) < 1e3) return {M, b};
  }
}

DualityPair duality_pair(std::uint64_t seed) {
  SeededRng rng(seed);
  const Expr u = Expr::var(0), v = Expr::var(1);
  const std::string tag = "_s" + std::to_string(seed);
  DualityPair out;

  // Cone with vertex line R e6 in the hyperplane x5 = 0; director in x5 = 1.
  ExprMap cone_dir{{"u", "v"}, {u, v, random_quadratic(rng, u, v), random_quadratic(rng, u, v), Expr(1.0), Expr(0.0)}};
  out.cone = make_cone("duality_cone" + tag, Eigen::VectorXcd::Zero(6), unit(6, 5), cone_dir, seed);
  Eigen::MatrixXd to_infinity = Eigen::MatrixXd::Zero(7, 7);
  to_infinity(0, 5) = 1.0;            // weight = x5
  to_infinity(5, 0) = -1.0;           // x5 -> x5 - 1
  to_infinity.bottomRightCorner(6, 6) += Eigen::MatrixXd::Identity(6, 6);
  {
    CorpusEntry img{"duality_cylinder_from_cone" + tag, seed,
                    projective_transform(std::get<RuledSpec>(out.cone.spec), to_infinity), {}};
    std::get<RuledSpec>(img.spec).name = img.name;
    img.expected.l = 2;
    img.expected.generators = orthonormal_basis((Eigen::MatrixXcd(6, 2) << unit(6, 4), unit(6, 5)).finished());
    img.expected.source["l"] = "construction";
    img.expected.source["generators"] = "vertex flat sent to infinity";
    fill_oracle_fields(img);
    screen_expected(img.expected, 4, 6, Verdict::Cylinder, "all focal hyperplanes lie at infinity");
    auto [M, b] = random_affine_map(derive_seed(seed, 11), 6);
    out.cylinder_from_cone = affine_transform(img, M, b);
  }

  // Cylinder over a director in x5 = x6 = 0 with generators e5, e6.
  ExprMap cyl_dir{{"u", "v"}, {u, v, random_quadratic(rng, u, v), random_quadratic(rng, u, v), Expr(0.0), Expr(0.0)}};
  out.cylinder = make_cylinder("duality_cylinder" + tag, cyl_dir, {unit(6, 4), unit(6, 5)}, seed);
  const double s = rng.uniform(0.5, 2.0);
  Eigen::MatrixXd from_infinity = Eigen::MatrixXd::Identity(7, 7);
  from_infinity(0, 5) = s; // weight = 1 + s x5
  {
    CorpusEntry img{"duality_cone_from_cylinder" + tag, seed,
                    projective_transform(std::get<RuledSpec>(out.cylinder.spec), from_infinity), {}};
    std::get<RuledSpec>(img.spec).name = img.name;
    img.expected.l = 2;
    img.expected.vertex = normalized_flat(unit(6, 4) / s, unit(6, 5));
    img.expected.source["l"] = "construction";
    img.expected.source["vertex"] = "generator directions brought back from infinity";
    fill_oracle_fields(img);
    screen_expected(img.expected, 4, 6, Verdict::Cone, "focal hyperplanes coincide in a finite hyperplane");
    auto [M, b] = random_affine_map(derive_seed(seed, 12), 6);
    out.cone_from_cylinder = affine_transform(img, M, b);
  }
  return out;
}

BruteForceRank brute_force_gauss_rank(const ExprMap& map, std::span<const Complex> point, double h) {
  const int n = map.n_params(), N = map.n_out();
  auto projector = [&](std::span<const Complex> x) {
    const Eigen::MatrixXcd T = eval_jet2(map, x).d1;
    if (numerical_rank(T, 1e-10).rank < n) throw NotImmersed("tangent map is rank deficient");
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(T);
    const Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(N, n);
    return Eigen::MatrixXcd(Q * Q.adjoint());
  };
  projector(point);
  Eigen::MatrixXd D(2 * N * N, n);
  std::vector<Complex> xp(point.begin(), point.end()), xm = xp;
  for (int k = 0; k < n; ++k) {
    xp[static_cast<std::size_t>(k)] += h;
    xm[static_cast<std::size_t>(k)] -= h;
    const Eigen::MatrixXcd dP = (projector(xp) - projector(xm)) / (2.0 * h);
    xp[static_cast<std::size_t>(k)] = point[static_cast<std::size_t>(k)];
    xm[static_cast<std::size_t>(k)] = point[static_cast<std::size_t>(k)];
    const Eigen::VectorXcd flat = dP.reshaped();
    D.col(k) << flat.real(), flat.imag();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
  BruteForceRank out;
  const auto& s = svd.singularValues();
  out.sigmas.assign(s.data(), s.data() + s.size());
  const double cut = std::max(1e-6 * (s.size() ? s(0) : 0.0), 1e-8);
  while (out.rank < s.size() && s(out.rank) > cut) ++out.rank;
  const double upper = out.rank > 0 ? s(out.rank - 1) : 1.0;
  const double lower = out.rank < s.size() ? s(out.rank) : 0.0;
  out.gap_ratio = lower > 0.0 ? upper / lower : std::numeric_limits<double>::infinity();
  return out;
}

int brute_force_form_count(const ExprMap& map, std::span<const Complex> point, double h) {
  const int n = map.n_params();
  const Jet2 fd = finite_diff_jet2(map, point, FiniteDiffSteps{h, h});
  const Eigen::Index N = fd.value.size();
  Eigen::MatrixXcd osc(N, n + n * (n + 1) / 2);
  osc.leftCols(n) = fd.d1;
  int col = n;
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q) {
      for (Eigen::Index k = 0; k < N; ++k) osc(k, col) = fd.d2[static_cast<std::size_t>(k)](p, q);
      ++col;
    }
  return numerical_rank(osc, 1e-6, 1e-7).rank - n;
}

std::vector<CorpusEntry> standard_corpus(std::uint64_t seed) {
  std::vector<CorpusEntry> out;
  out.push_back(veronese_cylinder());
  out.push_back(veronese_cone());
  out.push_back(random_cylinder(derive_seed(seed, 1)));
  out.push_back(random_cone(derive_seed(seed, 2)));
  out.push_back(random_regular_example(derive_seed(seed, 3), 2, 2, 6));
  out.push_back(random_regular_example(derive_seed(seed, 4), 3, 2, 7));
  out.push_back(curve_cylinder());
  out.push_back(degenerate_pencil());
  auto pair = duality_pair(derive_seed(seed, 5));
  out.push_back(std::move(pair.cylinder_from_cone));
  out.push_back(std::move(pair.cone_from_cylinder));
  out.push_back(sacksteder());
  out.push_back(sacksteder_chart());
  out.push_back(plane());
  out.push_back(paraboloid());
  return out;
}

std::vector<std::string> check_expectations(const CorpusEntry& entry, const Classification& c, double tol) {
  std::vector<std::string> bad;
  const auto& e = entry.expected;
  auto cmp = [&](const char* what, int want, int got) {
    if (want >= 0 && want != got)
      bad.push_back(std::string(what) + ": expected " + std::to_string(want) + ", got " + std::to_string(got));
  };
  cmp("r", e.r, c.r);
  cmp("l", e.l, c.l);
  if (c.m >= 0) cmp("m", e.m, c.m);
  if (e.verdict != c.verdict) bad.push_back("verdict: expected " + to_string(e.verdict) + ", got " + to_string(c.verdict));
  if (!e.reason.empty() && e.reason != c.reason && e.verdict == c.verdict)
    bad.push_back("reason: expected '" + e.reason + "', got '" + c.reason + "'");
  if (e.generators && c.verdict == Verdict::Cylinder) {
    if (!c.generators) {
      bad.push_back("generators: none recovered");
    } else if (double d = subspace_distance(*e.generators, c.generators->basis); d > tol) {
      bad.push_back("generators: subspace distance " + std::to_string(d));
    }
  }
  if (e.vertex && c.verdict == Verdict::Cone) {
    if (!c.vertex) {
      bad.push_back("vertex: none recovered");
    } else if (double d = flat_distance(*e.vertex, c.vertex->flat); d > tol) {
      bad.push_back("vertex: flat distance " + std::to_string(d));
    }
  }
  return bad;
}

nlohmann::json to_json(const Expected& e) {
  nlohmann::json j{{"r", e.r}, {"l", e.l}, {"m", e.m}, {"verdict", to_string(e.verdict)}, {"reason", e.reason},
                   {"source", e.source}};
  if (e.generators) j["generators"] = matrix_to_json(*e.generators);
  if (e.vertex) j["vertex"] = flat_to_json(*e.vertex);
  return j;
}

Expected expected_from_json(const nlohmann::json& j) {
  Expected e;
  e.r = j.value("r", -1);
  e.l = j.value("l", -1);
  e.m = j.value("m", -1);
  e.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  e.reason = j.value("reason", "");
  if (j.contains("source")) e.source = j.at("source").get<std::map<std::string, std::string>>();
  if (j.contains("generators")) e.generators = matrix_from_json(j.at("generators"));
  if (j.contains("vertex")) e.vertex = flat_from_json(j.at("vertex"));
  return e;
}

nlohmann::json to_json(const CorpusEntry& entry) {
  return {{"schema", "affcyl.corpus-entry/1"}, {"name", entry.name}, {"seed", entry.seed},
          {"spec", to_json(entry.spec)}, {"expected", to_json(entry.expected)}};
}

CorpusEntry entry_from_json(const nlohmann::json& j) {
  CorpusEntry e{j.at("name").get<std::string>(), j.value("seed", std::uint64_t{0}), spec_from_json(j.at("spec")), {}};
  e.expected = expected_from_json(j.at("expected"));
  return e;
}

void write_corpus(const std::vector<CorpusEntry>& entries, std::uint64_t seed, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  auto write = [](const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << dump(j);
    if (!os) throw std::runtime_error("write failed for " + path.string());
  };
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : entries) {
    const std::string file = e.name + ".json";
    write(dir / file, to_json(e));
    list.push_back({{"name", e.name}, {"file", file}, {"seed", e.seed}, {"expected", to_json(e.expected)}});
  }
  write(dir / "manifest.json", {{"schema", "affcyl.manifest/1"}, {"seed", seed}, {"entries", list}});
}

std::vector<CorpusEntry> read_corpus(const std::filesystem::path& dir) {
  auto read = [](const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    try {
      return nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path.string() + ": " + e.what());
    }
  };
  const auto manifest = read(dir / "manifest.json");
  std::vector<CorpusEntry> out;
  for (const auto& item : manifest.at("entries")) out.push_back(entry_from_json(read(dir / item.at("file").get<std::string>())));
  return out;
}

} // namespace affcyl
