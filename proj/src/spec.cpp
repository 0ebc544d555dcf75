#include "affcyl/spec.hpp"

#include <algorithm>

#include "affcyl/error.hpp"

namespace affcyl {

namespace {

void check_domain(const std::vector<Interval>& domain, int dim, const std::string& what) {
  if (domain.empty()) return;
  if (static_cast<int>(domain.size()) != dim) throw InvalidSpec(what + ": domain needs one interval per parameter");
  for (auto [lo, hi] : domain)
    if (!(lo < hi)) throw InvalidSpec(what + ": empty domain interval");
}

nlohmann::json domain_to_json(const std::vector<Interval>& domain) {
  nlohmann::json out = nlohmann::json::array();
  for (auto [lo, hi] : domain) out.push_back({lo, hi});
  return out;
}

std::vector<Interval> domain_from_json(const nlohmann::json& j) {
  std::vector<Interval> out;
  if (!j.contains("domain")) return out;
  for (const auto& iv : j.at("domain")) {
    if (!iv.is_array() || iv.size() != 2) throw ParseError("domain entries must be [lo, hi]");
    out.emplace_back(iv[0].get<double>(), iv[1].get<double>());
  }
  return out;
}

} // namespace

void RuledSpec::validate() const {
  if (r < 1 || l < 0 || N < 1) throw InvalidSpec(name + ": need r >= 1, l >= 0");
  if (n() > N - 1) throw InvalidSpec(name + ": n = l + r must be at most N - 1");
  if (base.n_params() != r || base.n_out() != N) throw InvalidSpec(name + ": base map must have r inputs and N outputs");
  if (static_cast<int>(generators.size()) != l) throw InvalidSpec(name + ": expected l generator maps");
  base.validate();
  for (const auto& g : generators) {
    if (g.vars != base.vars || g.n_out() != N) throw InvalidSpec(name + ": generator maps must share the base variables and have N outputs");
    g.validate();
  }
  const auto leaf_names = numbered_vars("t", l);
  for (const auto& v : base.vars)
    if (std::find(leaf_names.begin(), leaf_names.end(), v) != leaf_names.end())
      throw InvalidSpec(name + ": base variable '" + v + "' collides with a leaf coordinate name");
  check_domain(domain, r, name);
}

void ChartSpec::validate() const {
  map.validate();
  if (map.n_out() < map.n_params() + 1) throw InvalidSpec(name + ": codimension must be at least 1");
  check_domain(domain, map.n_params(), name);
}

const std::string& spec_name(const SpecDocument& doc) {
  return std::visit([](const auto& s) -> const std::string& { return s.name; }, doc);
}

ExprMap full_chart(const RuledSpec& spec) {
  ExprMap out;
  out.vars = numbered_vars("t", spec.l);
  out.vars.insert(out.vars.end(), spec.base.vars.begin(), spec.base.vars.end());
  std::vector<Expr> shift;
  for (int q = 0; q < spec.r; ++q) shift.push_back(Expr::var(spec.l + q));
  for (int k = 0; k < spec.N; ++k) {
    std::vector<Expr> terms{substitute(spec.base.components[k], shift)};
    for (int a = 0; a < spec.l; ++a)
      terms.push_back(Expr::var(a) * substitute(spec.generators[a].components[k], shift));
    out.components.push_back(sum(terms));
  }
  return out;
}

std::vector<Complex> chart_point(std::span<const Complex> t, std::span<const Complex> u) {
  std::vector<Complex> out(t.begin(), t.end());
  out.insert(out.end(), u.begin(), u.end());
  return out;
}

std::vector<Interval> effective_domain(const std::vector<Interval>& domain, int dim) {
  if (!domain.empty()) return domain;
  return std::vector<Interval>(static_cast<std::size_t>(dim), Interval{-0.5, 0.5});
}

nlohmann::json to_json(const RuledSpec& spec) {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : spec.generators) gens.push_back(to_json(g));
  nlohmann::json out{{"schema", "affcyl.spec/1"}, {"kind", "ruled"}, {"name", spec.name}, {"r", spec.r},
                     {"l", spec.l}, {"N", spec.N}, {"base", to_json(spec.base)}, {"generators", std::move(gens)}};
  if (!spec.domain.empty()) out["domain"] = domain_to_json(spec.domain);
  return out;
}

nlohmann::json to_json(const ChartSpec& spec) {
  nlohmann::json out{{"schema", "affcyl.spec/1"}, {"kind", "chart"}, {"name", spec.name}, {"map", to_json(spec.map)}};
  if (!spec.domain.empty()) out["domain"] = domain_to_json(spec.domain);
  return out;
}

nlohmann::json to_json(const SpecDocument& doc) {
  return std::visit([](const auto& s) { return to_json(s); }, doc);
}

SpecDocument spec_from_json(const nlohmann::json& j) {
  if (j.is_object() && j.contains("spec") && !j.contains("kind")) return spec_from_json(j.at("spec"));
  if (!j.is_object() || !j.contains("kind")) throw ParseError("spec document needs a \"kind\" field");
  const auto kind = j.at("kind").get<std::string>();
  const std::string name = j.value("name", std::string("unnamed"));
  if (kind == "chart") {
    ChartSpec spec{name, exprmap_from_json(j.at("map")), domain_from_json(j)};
    spec.validate();
    return spec;
  }
  if (kind != "ruled") throw ParseError("unknown spec kind '" + kind + "'");
  RuledSpec spec;
  spec.name = name;
  spec.r = j.at("r").get<int>();
  spec.l = j.at("l").get<int>();
  spec.N = j.at("N").get<int>();
  spec.base = exprmap_from_json(j.at("base"));
  for (const auto& g : j.at("generators")) spec.generators.push_back(exprmap_from_json(g));
  spec.domain = domain_from_json(j);
  spec.validate();
  return spec;
}

} // namespace affcyl
