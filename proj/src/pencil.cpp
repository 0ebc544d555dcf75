#include "affcyl/pencil.hpp"

#include <algorithm>
#include <numeric>

#include "affcyl/error.hpp"
#include "affcyl/random.hpp"

namespace affcyl {
namespace {

// `scale` is the size of the whole family, so a form that is pure roundoff
// next to its siblings never counts as regular.
bool leading_form_regular(const Eigen::MatrixXcd& b, double scale = 0.0) {
  auto s = singular_values(b);
  return !s.empty() && s.front() > 0.0 && s.back() >= kLeadingFormTol * std::max(s.front(), scale);
}

bool lex_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

double offdiag_relative(const Eigen::MatrixXcd& m) {
  double off = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) off = std::max(off, std::abs(m(i, j)));
  return off / std::max(1.0, max_abs(m));
}

Eigen::MatrixXcd combine(const std::vector<Eigen::MatrixXcd>& forms, const std::vector<double>& xi) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(forms.front().rows(), forms.front().cols());
  for (std::size_t a = 0; a < forms.size(); ++a) out += xi[a] * forms[a];
  return out;
}

} // namespace

std::vector<Complex> characteristic_eigenvalues(const Eigen::MatrixXcd& b_prime, const Eigen::MatrixXcd& b_double_prime) {
  return analyze_pair(b_prime, b_double_prime).eigenvalues;
}

Distinctness eigenvalue_distinctness(std::span<const Complex> eigenvalues, double tol_gap) {
  Distinctness out;
  if (eigenvalues.size() < 2) {
    out.min_gap = std::numeric_limits<double>::infinity();
    return out;
  }
  double biggest = 0.0;
  out.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    biggest = std::max(biggest, std::abs(eigenvalues[i]));
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j)
      out.min_gap = std::min(out.min_gap, std::abs(eigenvalues[i] - eigenvalues[j]));
  }
  out.distinct = out.min_gap > tol_gap * (1.0 + biggest);
  return out;
}

PencilAnalysis analyze_pair(const Eigen::MatrixXcd& b_prime, const Eigen::MatrixXcd& b_double_prime, double tol_gap) {
  if (!leading_form_regular(b_prime)) throw SingularLeadingForm("det B' vanishes numerically");
  PencilAnalysis out;
  out.b_prime = b_prime;
  out.b_double_prime = b_double_prime;
  out.regular = true;

  const Eigen::MatrixXcd m = -b_prime.partialPivLu().solve(b_double_prime);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, true);
  const auto& vals = es.eigenvalues();
  const Eigen::Index r = vals.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(r));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return lex_less(vals(i), vals(j)); });

  out.eigenbasis.resize(r, r);
  for (Eigen::Index p = 0; p < r; ++p) {
    const Eigen::Index src = order[static_cast<std::size_t>(p)];
    out.eigenvalues.push_back(vals(src));
    Eigen::VectorXcd v = es.eigenvectors().col(src);
    // Scale gauge: the first entry within roundoff of the largest magnitude becomes 1.
    const double biggest = v.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    while (std::abs(v(pivot)) < biggest * (1.0 - 1e-9)) ++pivot;
    out.eigenbasis.col(p) = v / v(pivot);
  }
  const Distinctness d = eigenvalue_distinctness(out.eigenvalues, tol_gap);
  out.distinct = d.distinct;
  out.min_gap = d.min_gap;
  // A defective pencil splits a repeated root by about sqrt(eps); such a split
  // sits below the eigenvalue perturbation bound cond(S) * eps * |M|.
  out.eigen_condition = condition_number(out.eigenbasis);
  const double floor = 1e3 * out.eigen_condition * std::numeric_limits<double>::epsilon() * std::max(1.0, m.norm());
  if (r > 1 && !(out.min_gap > floor)) out.distinct = false;
  return out;
}

PencilAnalysis select_regular_pair(const SecondForms& forms, std::uint64_t seed, double tol_gap, int budget) {
  if (forms.m < 2) throw MTooSmall("m = " + std::to_string(forms.m) + " independent forms, need at least 2");
  const int k = static_cast<int>(forms.forms.size());
  double scale = 0.0;
  for (const auto& f : forms.forms) scale = std::max(scale, singular_values(f).front());
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      if (a == b || !leading_form_regular(forms.forms[a], scale)) continue;
      PencilAnalysis pa = analyze_pair(forms.forms[a], forms.forms[b], tol_gap);
      if (!pa.distinct) continue;
      pa.selection.kind = PencilSelection::Kind::IndexPair;
      pa.selection.alpha_prime = a;
      pa.selection.alpha_double_prime = b;
      pa.selection.seed = seed;
      pa.selection.xi_prime.assign(k, 0.0);
      pa.selection.xi_double_prime.assign(k, 0.0);
      pa.selection.xi_prime[a] = 1.0;
      pa.selection.xi_double_prime[b] = 1.0;
      return pa;
    }
  }
  for (int trial = 0; trial < budget; ++trial) {
    SeededRng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
    std::vector<double> xi1(k), xi2(k);
    for (auto& x : xi1) x = rng.uniform(-1.0, 1.0);
    for (auto& x : xi2) x = rng.uniform(-1.0, 1.0);
    const Eigen::MatrixXcd b1 = combine(forms.forms, xi1);
    if (!leading_form_regular(b1, scale)) continue;
    PencilAnalysis pa = analyze_pair(b1, combine(forms.forms, xi2), tol_gap);
    if (!pa.distinct) continue;
    pa.selection.kind = PencilSelection::Kind::RandomCombination;
    pa.selection.trial = trial;
    pa.selection.seed = seed;
    pa.selection.xi_prime = std::move(xi1);
    pa.selection.xi_double_prime = std::move(xi2);
    return pa;
  }
  throw NoRegularPair("no pair with det B' != 0 and distinct roots after " + std::to_string(k * (k - 1)) +
                      " index pairs and " + std::to_string(budget) + " random combinations");
}

Diagonalization simultaneous_diagonalize(const PencilAnalysis& pa, const LeafData& data, double tol) {
  if (!pa.regular) throw HypothesisNotMet("pencil is not regular");
  if (!pa.distinct) throw HypothesisNotMet("pencil eigenvalues are not distinct");
  const Eigen::MatrixXcd& s = pa.eigenbasis;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(s);
  Diagonalization out;
  for (std::size_t a = 0; a < data.C.size(); ++a) {
    const Eigen::MatrixXcd d = lu.solve(data.C[a] * s);
    std::vector<Complex> diag(static_cast<std::size_t>(d.rows()));
    for (Eigen::Index p = 0; p < d.rows(); ++p) diag[static_cast<std::size_t>(p)] = d(p, p);
    if (a == 0) diag.assign(diag.size(), Complex{1.0, 0.0});
    else out.off_diag_residual = std::max(out.off_diag_residual, offdiag_relative(d));
    out.diagonals.push_back(std::move(diag));
  }
  out.forms_residual = std::max(offdiag_relative(s.transpose() * pa.b_prime * s),
                                offdiag_relative(s.transpose() * pa.b_double_prime * s));
  out.within_tol = out.off_diag_residual <= tol;
  return out;
}

} // namespace affcyl
