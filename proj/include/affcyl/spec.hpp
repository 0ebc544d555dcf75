#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "affcyl/expr.hpp"

namespace affcyl {

using Interval = std::pair<double, double>;

/// Leaf-adapted parametrization f(t, u) = A_0(u) + sum_a t^a A_a(u).
struct RuledSpec {
  std::string name;
  int r = 0; // base dimension
  int l = 0; // generator dimension
  int N = 0; // ambient dimension
  ExprMap base;                   // A_0: r inputs, N outputs
  std::vector<ExprMap> generators; // A_1..A_l, same inputs as base
  std::vector<Interval> domain;   // sampling box for the base parameters

  int n() const { return r + l; }

  /// Throws InvalidSpec on shape mismatches or n > N - 1.
  void validate() const;
};

/// A general chart with no leaf structure supplied.
struct ChartSpec {
  std::string name;
  ExprMap map;
  std::vector<Interval> domain;

  void validate() const;
};

using SpecDocument = std::variant<RuledSpec, ChartSpec>;

const std::string& spec_name(const SpecDocument& doc);

/// Parameters ordered (t^1..t^l, u^1..u^r); leaf variables are named t1..tl.
ExprMap full_chart(const RuledSpec& spec);

/// Concatenate leaf and base coordinates into a chart point.
std::vector<Complex> chart_point(std::span<const Complex> t, std::span<const Complex> u);

/// Default sampling box [-0.5, 0.5] when a spec carries none.
std::vector<Interval> effective_domain(const std::vector<Interval>& domain, int dim);

nlohmann::json to_json(const RuledSpec& spec);
nlohmann::json to_json(const ChartSpec& spec);
nlohmann::json to_json(const SpecDocument& doc);

/// Accepts a spec document or a corpus entry wrapping one under "spec".
SpecDocument spec_from_json(const nlohmann::json& j);

} // namespace affcyl
