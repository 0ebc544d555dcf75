#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace affcyl {

using Complex = std::complex<double>;

enum class Op { Const, Var, Add, Sub, Neg, Mul, Div, Pow, Sin, Cos, Exp };

/// Immutable expression tree over indexed variables with complex constants.
///
/// Nodes are shared, so copying an Expr is cheap. Add and Mul are n-ary;
/// Sub and Div are binary; Neg, Sin, Cos, Exp are unary; Pow carries an
/// integer exponent.
class Expr {
public:
  Expr();
  Expr(double value);  // NOLINT(google-explicit-constructor)
  Expr(Complex value); // NOLINT(google-explicit-constructor)

  static Expr constant(Complex value);
  static Expr var(int index);
  static Expr make(Op op, std::vector<Expr> args, int exponent = 0);

  Op op() const;
  Complex value() const;
  int var_index() const;
  int exponent() const;
  const std::vector<Expr>& args() const;

  /// Structural equality (bitwise on constants).
  bool operator==(const Expr& other) const;

private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);

/// Sum of terms; an empty list gives the zero constant.
Expr sum(std::span<const Expr> terms);

/// Largest variable index referenced, or -1 for closed expressions.
int max_var_index(const Expr& e);

/// Replace variable i by replacements[i].
Expr substitute(const Expr& e, std::span<const Expr> replacements);

Complex evaluate(const Expr& e, std::span<const Complex> point);

/// A vector-valued map u -> (f_1(u), ..., f_N(u)) with named variables.
struct ExprMap {
  std::vector<std::string> vars;
  std::vector<Expr> components;

  int n_params() const { return static_cast<int>(vars.size()); }
  int n_out() const { return static_cast<int>(components.size()); }

  /// Throws UnknownVariable when a component references an undeclared index.
  void validate() const;

  std::vector<Complex> evaluate(std::span<const Complex> point) const;
};

nlohmann::json expr_to_json(const Expr& e, const std::vector<std::string>& vars);
Expr expr_from_json(const nlohmann::json& j, const std::vector<std::string>& vars);

/// {"vars": [...], "components": [...]} in prefix notation.
nlohmann::json to_json(const ExprMap& map);
ExprMap exprmap_from_json(const nlohmann::json& j);

/// Build an ExprMap of `n_params` variables named prefix1..prefixN.
std::vector<std::string> numbered_vars(const std::string& prefix, int count);

} // namespace affcyl
