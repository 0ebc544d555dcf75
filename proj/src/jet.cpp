#include "affcyl/jet.hpp"

#include <cmath>

#include "affcyl/error.hpp"

namespace affcyl {
namespace {

constexpr double kDivisionFloor = 1e-14;

// Scalar second-order jet; only the upper triangle of hess is meaningful
// while propagating and is mirrored at the end.
struct ScalarJet {
  Complex v;
  Eigen::VectorXcd g;
  Eigen::MatrixXcd h;
};

ScalarJet constant_jet(Complex c, int n) {
  return {c, Eigen::VectorXcd::Zero(n), Eigen::MatrixXcd::Zero(n, n)};
}

// Upper triangle of a*Hb + b*Ha + ga gb^T + gb ga^T.
ScalarJet multiply(const ScalarJet& a, const ScalarJet& b) {
  const int n = static_cast<int>(a.g.size());
  ScalarJet out{a.v * b.v, a.v * b.g + b.v * a.g, Eigen::MatrixXcd::Zero(n, n)};
  for (int q = 0; q < n; ++q)
    for (int p = 0; p <= q; ++p)
      out.h(p, q) = a.v * b.h(p, q) + b.v * a.h(p, q) + (a.g(p) * b.g(q) + b.g(p) * a.g(q));
  return out;
}

// Chain rule for a scalar function with derivatives d0, d1, d2 at a.v.
ScalarJet compose(const ScalarJet& a, Complex d0, Complex d1, Complex d2) {
  const int n = static_cast<int>(a.g.size());
  ScalarJet out{d0, d1 * a.g, Eigen::MatrixXcd::Zero(n, n)};
  for (int q = 0; q < n; ++q)
    for (int p = 0; p <= q; ++p) out.h(p, q) = d1 * a.h(p, q) + d2 * (a.g(p) * a.g(q));
  return out;
}

Complex ipow(Complex base, int k) {
  Complex r{1.0, 0.0};
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

ScalarJet eval(const Expr& e, std::span<const Complex> x) {
  const int n = static_cast<int>(x.size());
  const auto& args = e.args();
  switch (e.op()) {
  case Op::Const:
    return constant_jet(e.value(), n);
  case Op::Var: {
    if (e.var_index() >= n) throw UnknownVariable("variable index " + std::to_string(e.var_index()));
    ScalarJet j = constant_jet(x[e.var_index()], n);
    j.g(e.var_index()) = 1.0;
    return j;
  }
  case Op::Add: {
    ScalarJet s = eval(args[0], x);
    for (std::size_t i = 1; i < args.size(); ++i) {
      ScalarJet t = eval(args[i], x);
      s.v += t.v;
      s.g += t.g;
      s.h += t.h;
    }
    return s;
  }
  case Op::Sub: {
    ScalarJet a = eval(args[0], x);
    ScalarJet b = eval(args[1], x);
    return {a.v - b.v, a.g - b.g, a.h - b.h};
  }
  case Op::Neg: {
    ScalarJet a = eval(args[0], x);
    return {-a.v, -a.g, -a.h};
  }
  case Op::Mul: {
    ScalarJet p = eval(args[0], x);
    for (std::size_t i = 1; i < args.size(); ++i) p = multiply(p, eval(args[i], x));
    return p;
  }
  case Op::Div: {
    ScalarJet num = eval(args[0], x);
    ScalarJet den = eval(args[1], x);
    if (std::abs(den.v) < kDivisionFloor) throw DomainError("division by a vanishing denominator");
    const Complex inv = Complex{1.0, 0.0} / den.v;
    return multiply(num, compose(den, inv, -inv * inv, 2.0 * inv * inv * inv));
  }
  case Op::Pow: {
    ScalarJet a = eval(args[0], x);
    const int k = e.exponent();
    if (k == 0) return constant_jet({1.0, 0.0}, n);
    if (k < 0) {
      if (std::abs(a.v) < kDivisionFloor) throw DomainError("negative power of a vanishing base");
      const Complex inv = Complex{1.0, 0.0} / a.v;
      const int m = -k;
      // d/da a^{-m} = -m a^{-m-1}, second: m(m+1) a^{-m-2}
      return compose(a, ipow(inv, m), -double(m) * ipow(inv, m + 1), double(m) * (m + 1) * ipow(inv, m + 2));
    }
    const Complex d1 = double(k) * ipow(a.v, k - 1);
    const Complex d2 = k >= 2 ? double(k) * (k - 1) * ipow(a.v, k - 2) : Complex{};
    return compose(a, ipow(a.v, k), d1, d2);
  }
  case Op::Sin: {
    ScalarJet a = eval(args[0], x);
    const Complex s = std::sin(a.v), c = std::cos(a.v);
    return compose(a, s, c, -s);
  }
  case Op::Cos: {
    ScalarJet a = eval(args[0], x);
    const Complex s = std::sin(a.v), c = std::cos(a.v);
    return compose(a, c, -s, -c);
  }
  case Op::Exp: {
    ScalarJet a = eval(args[0], x);
    const Complex v = std::exp(a.v);
    return compose(a, v, v, v);
  }
  }
  return constant_jet({}, n);
}

} // namespace

Jet2 eval_jet2(const ExprMap& map, std::span<const Complex> point) {
  if (static_cast<int>(point.size()) != map.n_params())
    throw DomainError("point has " + std::to_string(point.size()) + " coordinates, map expects " +
                      std::to_string(map.n_params()));
  const int n = map.n_params();
  const int N = map.n_out();
  Jet2 jet{Eigen::VectorXcd(N), Eigen::MatrixXcd(N, n), std::vector<Eigen::MatrixXcd>(N)};
  for (int k = 0; k < N; ++k) {
    ScalarJet s = eval(map.components[k], point);
    jet.value(k) = s.v;
    jet.d1.row(k) = s.g.transpose();
    Eigen::MatrixXcd h(n, n);
    for (int q = 0; q < n; ++q)
      for (int p = 0; p <= q; ++p) h(p, q) = h(q, p) = s.h(p, q);
    jet.d2[k] = std::move(h);
  }
  return jet;
}

Jet2 finite_diff_jet2(const ExprMap& map, std::span<const Complex> point, FiniteDiffSteps steps) {
  const int n = map.n_params();
  const int N = map.n_out();
  if (static_cast<int>(point.size()) != n) throw DomainError("point dimension mismatch");
  if (!(steps.first > 0.0) || !(steps.second > 0.0)) throw DomainError("finite-difference step must be positive");

  auto at = [&](std::initializer_list<std::pair<int, double>> shifts) {
    std::vector<Complex> x(point.begin(), point.end());
    for (auto [i, d] : shifts) x[i] += d;
    auto v = map.evaluate(x);
    return Eigen::Map<Eigen::VectorXcd>(v.data(), N).eval();
  };

  Jet2 jet{at({}), Eigen::MatrixXcd(N, n), std::vector<Eigen::MatrixXcd>(N, Eigen::MatrixXcd(n, n))};
  const double h1 = steps.first;
  for (int p = 0; p < n; ++p) jet.d1.col(p) = (at({{p, h1}}) - at({{p, -h1}})) / (2.0 * h1);

  const double h2 = steps.second;
  for (int p = 0; p < n; ++p) {
    const Eigen::VectorXcd dpp = (at({{p, h2}}) - 2.0 * jet.value + at({{p, -h2}})) / (h2 * h2);
    for (int k = 0; k < N; ++k) jet.d2[k](p, p) = dpp(k);
    for (int q = p + 1; q < n; ++q) {
      const Eigen::VectorXcd dpq =
          (at({{p, h2}, {q, h2}}) - at({{p, h2}, {q, -h2}}) - at({{p, -h2}, {q, h2}}) + at({{p, -h2}, {q, -h2}})) /
          (4.0 * h2 * h2);
      for (int k = 0; k < N; ++k) jet.d2[k](p, q) = jet.d2[k](q, p) = dpq(k);
    }
  }
  return jet;
}

Jet2 finite_diff_jet2(const ExprMap& map, std::span<const Complex> point, double h) {
  return finite_diff_jet2(map, point, FiniteDiffSteps{h, h});
}

double jet_distance(const Jet2& a, const Jet2& b) {
  double d = (a.value - b.value).cwiseAbs().maxCoeff();
  d = std::max(d, (a.d1 - b.d1).cwiseAbs().maxCoeff());
  for (std::size_t k = 0; k < a.d2.size(); ++k) d = std::max(d, (a.d2[k] - b.d2[k]).cwiseAbs().maxCoeff());
  return d;
}

} // namespace affcyl
