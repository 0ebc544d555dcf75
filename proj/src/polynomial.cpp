#include "affcyl/polynomial.hpp"

#include <algorithm>
#include <map>
#include <numbers>

#include "affcyl/error.hpp"

namespace affcyl {

namespace {

void enumerate(int n_vars, int remaining, Exponents& current, std::vector<Exponents>& out) {
  const auto idx = current.size();
  if (static_cast<int>(idx) == n_vars - 1) {
    current.push_back(remaining);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current.push_back(e);
    enumerate(n_vars, remaining - e, current, out);
    current.pop_back();
  }
}

Complex monomial_value(const Exponents& e, std::span<const Complex> x) {
  Complex v{1.0, 0.0};
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int k = 0; k < e[i]; ++k) v *= x[i];
  return v;
}

} // namespace

HomogeneousPolynomial::HomogeneousPolynomial(int n_vars, int degree)
    : n_vars_(n_vars), degree_(degree), exps_(monomial_basis(n_vars, degree)), coeffs_(exps_.size()) {}

std::vector<Exponents> HomogeneousPolynomial::monomial_basis(int n_vars, int degree) {
  std::vector<Exponents> out;
  if (n_vars <= 0) return out;
  Exponents current;
  enumerate(n_vars, degree, current, out);
  return out;
}

HomogeneousPolynomial HomogeneousPolynomial::linear(std::span<const Complex> coeffs) {
  HomogeneousPolynomial p(static_cast<int>(coeffs.size()), 1);
  // Basis order for degree 1 is e_0, e_1, ...
  for (std::size_t i = 0; i < coeffs.size(); ++i) p.coeffs_[i] = coeffs[i];
  return p;
}

Complex HomogeneousPolynomial::coeff(const Exponents& e) const {
  auto it = std::find(exps_.begin(), exps_.end(), e);
  return it == exps_.end() ? Complex{} : coeffs_[static_cast<std::size_t>(it - exps_.begin())];
}

Complex HomogeneousPolynomial::evaluate(std::span<const Complex> x) const {
  Complex s{};
  for (std::size_t k = 0; k < exps_.size(); ++k) s += coeffs_[k] * monomial_value(exps_[k], x);
  return s;
}

double HomogeneousPolynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

HomogeneousPolynomial HomogeneousPolynomial::operator*(const HomogeneousPolynomial& other) const {
  if (n_vars_ != other.n_vars_) throw std::invalid_argument("polynomials over different variable counts");
  std::map<Exponents, Complex> acc;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (coeffs_[i] == Complex{}) continue;
    for (std::size_t j = 0; j < other.exps_.size(); ++j) {
      Exponents e(exps_[i]);
      for (std::size_t v = 0; v < e.size(); ++v) e[v] += other.exps_[j][v];
      acc[e] += coeffs_[i] * other.coeffs_[j];
    }
  }
  HomogeneousPolynomial out(n_vars_, degree_ + other.degree_);
  for (std::size_t k = 0; k < out.exps_.size(); ++k) {
    auto it = acc.find(out.exps_[k]);
    if (it != acc.end()) out.coeffs_[k] = it->second;
  }
  return out;
}

double relative_coefficient_distance(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
  if (a.n_vars() != b.n_vars() || a.degree() != b.degree()) return std::numeric_limits<double>::infinity();
  double diff = 0.0;
  for (std::size_t k = 0; k < a.coeffs().size(); ++k) diff = std::max(diff, std::abs(a.coeffs()[k] - b.coeffs()[k]));
  const double scale = std::max(a.max_abs_coeff(), b.max_abs_coeff());
  return scale == 0.0 ? diff : diff / scale;
}

HomogeneousPolynomial determinant_polynomial(std::span<const Eigen::MatrixXcd> mats) {
  if (mats.empty()) throw std::invalid_argument("determinant_polynomial needs at least one matrix");
  const int k = static_cast<int>(mats.size());
  const int r = static_cast<int>(mats.front().rows());
  HomogeneousPolynomial out(k, r);
  const auto& basis = out.exponents();
  const auto count = static_cast<Eigen::Index>(basis.size());

  // The lattice points are the exponent vectors themselves.
  Eigen::MatrixXcd vandermonde(count, count);
  Eigen::VectorXcd values(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    std::vector<Complex> x(basis[static_cast<std::size_t>(i)].begin(), basis[static_cast<std::size_t>(i)].end());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r, r);
    for (int v = 0; v < k; ++v) m += x[static_cast<std::size_t>(v)] * mats[static_cast<std::size_t>(v)];
    values(i) = r == 0 ? Complex{1.0, 0.0} : m.partialPivLu().determinant();
    for (Eigen::Index j = 0; j < count; ++j) vandermonde(i, j) = monomial_value(basis[static_cast<std::size_t>(j)], x);
  }
  const Eigen::VectorXcd c = vandermonde.fullPivLu().solve(values);
  for (Eigen::Index j = 0; j < count; ++j) out.coeffs()[static_cast<std::size_t>(j)] = c(j);
  return out;
}

std::vector<Complex> restrict_to_line(const std::function<Complex(std::span<const Complex>)>& f,
                                      std::span<const Complex> p, std::span<const Complex> q, int degree) {
  const int samples = degree + 1;
  std::vector<Complex> values(static_cast<std::size_t>(samples));
  std::vector<Complex> x(p.size());
  for (int k = 0; k < samples; ++k) {
    const Complex s = std::polar(1.0, 2.0 * std::numbers::pi * k / samples);
    for (std::size_t i = 0; i < p.size(); ++i) x[i] = p[i] + s * q[i];
    values[static_cast<std::size_t>(k)] = f(x);
  }
  // Inverse DFT on the unit circle.
  std::vector<Complex> coeffs(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    Complex acc{};
    for (int k = 0; k < samples; ++k) acc += values[static_cast<std::size_t>(k)] * std::polar(1.0, -2.0 * std::numbers::pi * j * k / samples);
    coeffs[static_cast<std::size_t>(j)] = acc / static_cast<double>(samples);
  }
  return coeffs;
}

std::vector<Complex> polynomial_roots(std::vector<Complex> coeffs, double tol_rel) {
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};
  while (!coeffs.empty() && std::abs(coeffs.back()) <= tol_rel * scale) coeffs.pop_back();
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  std::vector<Complex> roots(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

} // namespace affcyl
