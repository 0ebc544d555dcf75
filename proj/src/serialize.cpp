#include "affcyl/serialize.hpp"

#include <cmath>
#include <sstream>

#include "affcyl/error.hpp"

namespace affcyl {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Eigen::VectorXcd vector_from_json(const json& j) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vector_to_json(m.row(i).transpose()));
  return out;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("matrix must be a list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols) throw ParseError("ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i][k]);
  }
  return m;
}

json ratio_to_json(double x) {
  if (std::isinf(x)) return "inf";
  return x;
}

json polynomial_to_json(const HomogeneousPolynomial& p, const std::vector<std::string>& vars) {
  json monomials = json::array();
  for (std::size_t i = 0; i < p.exponents().size(); ++i) {
    const Complex c = p.coeffs()[i];
    if (c == Complex{}) continue;
    monomials.push_back({{"exps", p.exponents()[i]}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"degree", p.degree()}, {"vars", vars}, {"monomials", monomials}};
}

json flat_to_json(const AmbientFlat& f) {
  return {{"point", vector_to_json(f.point)}, {"directions", matrix_to_json(f.directions)}, {"at_infinity", f.at_infinity}};
}

AmbientFlat flat_from_json(const json& j) {
  AmbientFlat f;
  f.point = vector_from_json(j.at("point"));
  f.directions = matrix_from_json(j.at("directions"));
  if (f.directions.rows() == 0) f.directions.resize(f.point.size(), 0);
  f.at_infinity = j.value("at_infinity", false);
  return f;
}

namespace {

json point_to_json(const std::vector<Complex>& u) {
  json out = json::array();
  for (auto z : u) out.push_back(complex_to_json(z));
  return out;
}

json matrices_to_json(const std::vector<Eigen::MatrixXcd>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

std::vector<std::string> leaf_vars(int l) {
  std::vector<std::string> vars{"x0"};
  for (int a = 1; a <= l; ++a) vars.push_back("x" + std::to_string(a));
  return vars;
}

const char* kind_name(PencilSelection::Kind k) {
  switch (k) {
  case PencilSelection::Kind::IndexPair: return "index_pair";
  case PencilSelection::Kind::RandomCombination: return "random_combination";
  case PencilSelection::Kind::Explicit: return "explicit";
  }
  return "explicit";
}

} // namespace

json to_json(const RankProfile& p) {
  json samples = json::array();
  for (const auto& s : p.per_sample) {
    json js{{"u", point_to_json(s.u)}, {"r", s.r}, {"sigmas", s.sigmas}, {"gap_ratio", ratio_to_json(s.gap_ratio)},
            {"determined", s.determined}, {"immersed", s.immersed}};
    if (!s.error.empty()) js["error"] = s.error;
    samples.push_back(std::move(js));
  }
  return {{"r", p.r}, {"constant", p.constant}, {"violations", p.violations}, {"per_sample", samples}};
}

json to_json(const LeafData& d) {
  json H = json::array();
  for (const auto& row : d.H) H.push_back(matrices_to_json(row));
  return {{"u", point_to_json(d.u)},
          {"C", matrices_to_json(d.C)},
          {"B", matrices_to_json(d.B)},
          {"H", H},
          {"m", d.m},
          {"form_scale", d.form_scale},
          {"base_point", vector_to_json(d.base_point)},
          {"tangency_residual", d.tangency_residual},
          {"frame_condition", d.frame_condition}};
}

json to_json(const PencilAnalysis& p) {
  json eig = json::array();
  for (auto z : p.eigenvalues) eig.push_back(complex_to_json(z));
  const auto& s = p.selection;
  json sel{{"kind", kind_name(s.kind)}, {"trial", s.trial}, {"seed", s.seed}, {"xi_prime", s.xi_prime},
           {"xi_double_prime", s.xi_double_prime}};
  if (s.kind == PencilSelection::Kind::IndexPair) {
    sel["alpha_prime"] = s.alpha_prime;
    sel["alpha_double_prime"] = s.alpha_double_prime;
  }
  return {{"selection", sel},
          {"b_prime", matrix_to_json(p.b_prime)},
          {"b_double_prime", matrix_to_json(p.b_double_prime)},
          {"eigenvalues", eig},
          {"eigenbasis", matrix_to_json(p.eigenbasis)},
          {"regular", p.regular},
          {"distinct", p.distinct},
          {"min_gap", p.min_gap},
          {"eigen_condition", p.eigen_condition}};
}

json to_json(const Diagonalization& d) {
  json diag = json::array();
  for (const auto& row : d.diagonals) {
    json jr = json::array();
    for (auto z : row) jr.push_back(complex_to_json(z));
    diag.push_back(std::move(jr));
  }
  return {{"diagonals", diag},
          {"off_diag_residual", d.off_diag_residual},
          {"forms_residual", d.forms_residual},
          {"within_tol", d.within_tol}};
}

json to_json(const SampleEvidence& e) {
  json out{{"u", point_to_json(e.u)}};
  if (!e.failure.empty()) out["failure"] = e.failure;
  out["hypothesis_failure"] = e.hypothesis_failure;
  if (!e.leaf) return out;
  const int l = e.leaf->l();
  out["leaf"] = to_json(*e.leaf);
  out["basic_equations"] = {{"residual", e.basic.residual}, {"pass", e.basic.pass}, {"worst_alpha", e.basic.worst_alpha},
                            {"worst_index", e.basic.worst_index}};
  if (e.focal) out["focal_polynomial"] = polynomial_to_json(e.focal->poly, leaf_vars(l));
  if (e.hypercone) {
    std::vector<std::string> xi;
    for (int a = 0; a < e.hypercone->cone_poly.n_vars(); ++a) xi.push_back("xi" + std::to_string(a + 1));
    out["focal_hypercone"] = {{"polynomial", polynomial_to_json(e.hypercone->cone_poly, xi)},
                              {"squarefree", e.hypercone->squarefree},
                              {"probe_margins", e.hypercone->probe_margins}};
  }
  if (e.pencil) out["pencil"] = to_json(*e.pencil);
  if (e.diagonalization) out["diagonalization"] = to_json(*e.diagonalization);
  if (e.decomposition) {
    json hs = json::array();
    for (const auto& h : e.decomposition->hyperplanes) hs.push_back(vector_to_json(h));
    out["focal_hyperplanes"] = {{"covectors", hs}, {"residual", e.decomposition->residual},
                                {"coincidence_spread", e.coincidence_spread}, {"infinity_distance", e.infinity_distance}};
  }
  return out;
}

json to_json(const ClassifyConfig& c) {
  return {{"tol_rank", c.tol.rank},     {"tol_gap", c.tol.gap}, {"tol_coincide", c.tol.coincide},
          {"tol_residual", c.tol.residual}, {"seed", c.seed},   {"pencil_budget", c.pencil_budget}};
}

json verdict_document(const std::string& name, const Classification& c) {
  json out{{"schema", kVerdictSchema},
           {"name", name},
           {"verdict", to_string(c.verdict)},
           {"reason", c.reason},
           {"exit_code", exit_code(c.verdict)},
           {"r", c.r},
           {"l", c.l},
           {"m", c.m},
           {"n", c.n},
           {"N", c.N},
           {"max_residual", c.max_residual},
           {"notes", c.notes},
           {"config", to_json(c.config)},
           {"samples", c.samples.empty() ? c.rank_profile.per_sample.size() : c.samples.size()}};
  if (c.generators) {
    json gens = json::array();
    for (const auto& g : c.generators->generators) gens.push_back(vector_to_json(g));
    out["generators"] = {{"vectors", gens}, {"basis", matrix_to_json(c.generators->basis)}, {"drift", c.generators->drift}};
  }
  if (c.director)
    out["director"] = {{"dim", c.director->dim}, {"rank", c.director->rank}, {"nondegenerate", c.director->nondegenerate}};
  if (c.vertex) out["vertex"] = {{"flat", flat_to_json(c.vertex->flat)}, {"residual", c.vertex->residual}};
  return out;
}

json analysis_report(const std::string& name, const Classification& c) {
  json out = verdict_document(name, c);
  out["schema"] = kReportSchema;
  out["rank_profile"] = to_json(c.rank_profile);
  json samples = json::array();
  for (const auto& e : c.samples) samples.push_back(to_json(e));
  out["evidence"] = samples;
  return out;
}

std::string csv_header() { return "name,r,l,m,verdict,max_residual\n"; }

std::string csv_row(const std::string& name, const Classification& c) {
  std::ostringstream os;
  os.precision(17);
  os << name << ',' << c.r << ',' << c.l << ',' << c.m << ',' << to_string(c.verdict) << ',' << c.max_residual << '\n';
  return os.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace affcyl
