#include "affcyl/expr.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>

#include "affcyl/error.hpp"

namespace affcyl {

struct Expr::Node {
  Op op = Op::Const;
  Complex value{};
  int index = 0; // variable index or integer exponent
  std::vector<Expr> args;
};

Expr::Expr() : Expr(Complex{}) {}
Expr::Expr(double value) : Expr(Complex{value, 0.0}) {}
Expr::Expr(Complex value) {
  auto node = std::make_shared<Node>();
  node->op = Op::Const;
  node->value = value;
  node_ = std::move(node);
}
Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(Complex value) { return Expr(value); }

Expr Expr::var(int index) {
  if (index < 0) throw UnknownVariable("negative variable index");
  auto node = std::make_shared<Node>();
  node->op = Op::Var;
  node->index = index;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr Expr::make(Op op, std::vector<Expr> args, int exponent) {
  std::size_t want_min = 1, want_max = 1;
  switch (op) {
  case Op::Const:
  case Op::Var:
    throw ParseError("leaf nodes are built with constant()/var()");
  case Op::Add:
  case Op::Mul:
    want_min = 1;
    want_max = static_cast<std::size_t>(-1);
    break;
  case Op::Sub:
  case Op::Div:
    want_min = want_max = 2;
    break;
  default:
    break;
  }
  if (args.size() < want_min || args.size() > want_max)
    throw ParseError("wrong operand count for operator");
  auto node = std::make_shared<Node>();
  node->op = op;
  node->index = exponent;
  node->args = std::move(args);
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Op Expr::op() const { return node_->op; }
Complex Expr::value() const { return node_->value; }
int Expr::var_index() const { return node_->index; }
int Expr::exponent() const { return node_->index; }
const std::vector<Expr>& Expr::args() const { return node_->args; }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.op != b.op || a.index != b.index || a.args.size() != b.args.size()) return false;
  if (a.op == Op::Const) {
    return std::bit_cast<std::uint64_t>(a.value.real()) == std::bit_cast<std::uint64_t>(b.value.real()) &&
           std::bit_cast<std::uint64_t>(a.value.imag()) == std::bit_cast<std::uint64_t>(b.value.imag());
  }
  return std::equal(a.args.begin(), a.args.end(), b.args.begin());
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Op::Add, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Op::Sub, {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Op::Mul, {a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make(Op::Div, {a, b}); }
Expr operator-(const Expr& a) { return Expr::make(Op::Neg, {a}); }
Expr pow(const Expr& base, int exponent) { return Expr::make(Op::Pow, {base}, exponent); }
Expr sin(const Expr& a) { return Expr::make(Op::Sin, {a}); }
Expr cos(const Expr& a) { return Expr::make(Op::Cos, {a}); }
Expr exp(const Expr& a) { return Expr::make(Op::Exp, {a}); }

Expr sum(std::span<const Expr> terms) {
  if (terms.empty()) return Expr(0.0);
  if (terms.size() == 1) return terms.front();
  return Expr::make(Op::Add, std::vector<Expr>(terms.begin(), terms.end()));
}

int max_var_index(const Expr& e) {
  if (e.op() == Op::Var) return e.var_index();
  int best = -1;
  for (const auto& a : e.args()) best = std::max(best, max_var_index(a));
  return best;
}

Expr substitute(const Expr& e, std::span<const Expr> replacements) {
  switch (e.op()) {
  case Op::Const:
    return e;
  case Op::Var:
    if (e.var_index() >= static_cast<int>(replacements.size()))
      throw UnknownVariable("substitution for variable " + std::to_string(e.var_index()));
    return replacements[e.var_index()];
  default: {
    std::vector<Expr> args;
    args.reserve(e.args().size());
    for (const auto& a : e.args()) args.push_back(substitute(a, replacements));
    return Expr::make(e.op(), std::move(args), e.exponent());
  }
  }
}

Complex evaluate(const Expr& e, std::span<const Complex> point) {
  const auto& args = e.args();
  switch (e.op()) {
  case Op::Const:
    return e.value();
  case Op::Var:
    if (e.var_index() >= static_cast<int>(point.size()))
      throw UnknownVariable("variable index " + std::to_string(e.var_index()));
    return point[e.var_index()];
  case Op::Add: {
    Complex s{};
    for (const auto& a : args) s += evaluate(a, point);
    return s;
  }
  case Op::Mul: {
    Complex p{1.0, 0.0};
    for (const auto& a : args) p *= evaluate(a, point);
    return p;
  }
  case Op::Sub:
    return evaluate(args[0], point) - evaluate(args[1], point);
  case Op::Neg:
    return -evaluate(args[0], point);
  case Op::Div: {
    Complex den = evaluate(args[1], point);
    if (std::abs(den) < 1e-14) throw DomainError("division by a vanishing denominator");
    return evaluate(args[0], point) / den;
  }
  case Op::Pow: {
    Complex b = evaluate(args[0], point);
    int k = e.exponent();
    if (k < 0 && std::abs(b) < 1e-14) throw DomainError("negative power of a vanishing base");
    Complex r{1.0, 0.0};
    Complex f = k < 0 ? Complex{1.0, 0.0} / b : b;
    for (int i = 0; i < std::abs(k); ++i) r *= f;
    return r;
  }
  case Op::Sin:
    return std::sin(evaluate(args[0], point));
  case Op::Cos:
    return std::cos(evaluate(args[0], point));
  case Op::Exp:
    return std::exp(evaluate(args[0], point));
  }
  return {};
}

void ExprMap::validate() const {
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (max_var_index(components[k]) >= n_params())
      throw UnknownVariable("component " + std::to_string(k) + " references an undeclared variable");
  }
}

std::vector<Complex> ExprMap::evaluate(std::span<const Complex> point) const {
  std::vector<Complex> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(affcyl::evaluate(c, point));
  return out;
}

namespace {

const char* op_symbol(Op op) {
  switch (op) {
  case Op::Add: return "+";
  case Op::Sub: return "-";
  case Op::Neg: return "-";
  case Op::Mul: return "*";
  case Op::Div: return "/";
  case Op::Pow: return "^";
  case Op::Sin: return "sin";
  case Op::Cos: return "cos";
  case Op::Exp: return "exp";
  default: return "?";
  }
}

} // namespace

nlohmann::json expr_to_json(const Expr& e, const std::vector<std::string>& vars) {
  using nlohmann::json;
  switch (e.op()) {
  case Op::Const: {
    Complex v = e.value();
    if (v.imag() == 0.0 && !std::signbit(v.imag())) return json(v.real());
    return json::array({"c", v.real(), v.imag()});
  }
  case Op::Var:
    if (e.var_index() >= static_cast<int>(vars.size()))
      throw UnknownVariable("variable index " + std::to_string(e.var_index()) + " has no name");
    return json(vars[e.var_index()]);
  case Op::Pow:
    return json::array({"^", expr_to_json(e.args()[0], vars), e.exponent()});
  default: {
    json arr = json::array({op_symbol(e.op())});
    for (const auto& a : e.args()) arr.push_back(expr_to_json(a, vars));
    return arr;
  }
  }
}

Expr expr_from_json(const nlohmann::json& j, const std::vector<std::string>& vars) {
  if (j.is_number()) return Expr(j.get<double>());
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    auto it = std::find(vars.begin(), vars.end(), name);
    if (it == vars.end()) throw UnknownVariable("'" + name + "' is not declared");
    return Expr::var(static_cast<int>(it - vars.begin()));
  }
  if (!j.is_array() || j.empty() || !j[0].is_string())
    throw ParseError("expression node must be a number, a variable name or [op, ...]");
  const auto op = j[0].get<std::string>();
  const std::size_t nargs = j.size() - 1;
  if (op == "c") {
    if (nargs != 2 || !j[1].is_number() || !j[2].is_number())
      throw ParseError("complex constant must be [\"c\", re, im]");
    return Expr(Complex{j[1].get<double>(), j[2].get<double>()});
  }
  if (op == "^") {
    if (nargs != 2 || !j[2].is_number_integer()) throw ParseError("power must be [\"^\", base, int]");
    return pow(expr_from_json(j[1], vars), j[2].get<int>());
  }
  std::vector<Expr> args;
  for (std::size_t i = 1; i < j.size(); ++i) args.push_back(expr_from_json(j[i], vars));
  if (op == "+") return Expr::make(Op::Add, std::move(args));
  if (op == "*") return Expr::make(Op::Mul, std::move(args));
  if (op == "-") return Expr::make(nargs == 1 ? Op::Neg : Op::Sub, std::move(args));
  if (op == "/") return Expr::make(Op::Div, std::move(args));
  if (op == "sin") return Expr::make(Op::Sin, std::move(args));
  if (op == "cos") return Expr::make(Op::Cos, std::move(args));
  if (op == "exp") return Expr::make(Op::Exp, std::move(args));
  throw ParseError("unknown operator '" + op + "'");
}

nlohmann::json to_json(const ExprMap& map) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : map.components) comps.push_back(expr_to_json(c, map.vars));
  return {{"vars", map.vars}, {"components", std::move(comps)}};
}

ExprMap exprmap_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vars") || !j.contains("components"))
    throw ParseError("expression map needs \"vars\" and \"components\"");
  ExprMap map;
  map.vars = j.at("vars").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < map.vars.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (map.vars[i] == map.vars[k]) throw ParseError("duplicate variable '" + map.vars[i] + "'");
  for (const auto& c : j.at("components")) map.components.push_back(expr_from_json(c, map.vars));
  map.validate();
  return map;
}

std::vector<std::string> numbered_vars(const std::string& prefix, int count) {
  std::vector<std::string> out;
  for (int i = 1; i <= count; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

} // namespace affcyl
