#include "affcyl/focal.hpp"

#include <algorithm>

#include "affcyl/error.hpp"
#include "affcyl/random.hpp"

namespace affcyl {

FocalPolynomial focal_polynomial(const LeafData& data) { return {determinant_polynomial(data.C)}; }

FocalDecomposition factor_focal(const LeafData& data, const PencilAnalysis& pa, double tol) {
  const Diagonalization diag = simultaneous_diagonalize(pa, data, tol);
  if (!diag.within_tol)
    throw HypothesisNotMet("diagonalization residual " + std::to_string(diag.off_diag_residual) + " exceeds tolerance");
  const int r = data.r(), l = data.l();
  FocalDecomposition out;
  out.product = HomogeneousPolynomial(l + 1, 0);
  out.product.coeffs().front() = 1.0;
  for (int p = 0; p < r; ++p) {
    Eigen::VectorXcd h(l + 1);
    for (int a = 0; a <= l; ++a) h(a) = diag.diagonals[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)];
    out.product = out.product * HomogeneousPolynomial::linear(to_std(h));
    out.hyperplanes.push_back(std::move(h));
  }
  out.residual = relative_coefficient_distance(out.product, focal_polynomial(data).poly);
  return out;
}

FocalHypercone focal_hypercone(std::span<const Eigen::MatrixXcd> forms) {
  FocalHypercone out;
  if (forms.empty()) return out;
  const int r = static_cast<int>(forms.front().rows());
  const int k = static_cast<int>(forms.size());
  out.cone_poly = determinant_polynomial(forms);

  auto det_at = [&](std::span<const Complex> xi) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r, r);
    for (int a = 0; a < k; ++a) m += xi[static_cast<std::size_t>(a)] * forms[static_cast<std::size_t>(a)];
    return m.partialPivLu().determinant();
  };

  out.squarefree = true;
  for (std::uint64_t probe = 0; probe < 3; ++probe) {
    SeededRng rng(derive_seed(0x5EEDF0CA1ULL, probe));
    std::vector<Complex> p(static_cast<std::size_t>(k)), q(static_cast<std::size_t>(k));
    for (auto& x : p) x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    for (auto& x : q) x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const auto coeffs = restrict_to_line(det_at, p, q, r);
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    int effective = r;
    while (effective >= 0 && std::abs(coeffs[static_cast<std::size_t>(effective)]) <= 1e-10 * scale) --effective;
    double margin = 1.0;
    if (scale == 0.0 || r - effective >= 2) {
      margin = 0.0; // identically zero, or a repeated root at infinity
    } else if (effective >= 2) {
      // Repeated roots make the restriction share a factor with its derivative.
      const int d = effective;
      Eigen::MatrixXcd syl = Eigen::MatrixXcd::Zero(2 * d - 1, 2 * d - 1);
      for (int row = 0; row < d - 1; ++row)
        for (int i = 0; i <= d; ++i) syl(row, row + i) = coeffs[static_cast<std::size_t>(d - i)] / scale;
      for (int row = 0; row < d; ++row)
        for (int i = 0; i < d; ++i)
          syl(d - 1 + row, row + i) = static_cast<double>(d - i) * coeffs[static_cast<std::size_t>(d - i)] / scale;
      const auto sv = singular_values(syl);
      margin = sv.back() / sv.front();
    }
    out.probe_margins.push_back(margin);
    if (!(margin > kSquarefreeMargin)) out.squarefree = false;
  }
  return out;
}

FocalHypercone focal_hypercone(const SecondForms& forms) { return focal_hypercone(std::span(forms.forms)); }

std::vector<Complex> affine_focal_roots(const FocalPolynomial& focal) {
  const auto& poly = focal.poly;
  if (poly.n_vars() != 2) throw std::invalid_argument("affine_focal_roots needs a one-dimensional generator");
  // Exponents (r - k, k) contribute t^k.
  std::vector<Complex> coeffs(static_cast<std::size_t>(poly.degree() + 1));
  for (std::size_t i = 0; i < poly.exponents().size(); ++i)
    coeffs[static_cast<std::size_t>(poly.exponents()[i][1])] = poly.coeffs()[i];
  return polynomial_roots(coeffs);
}

AmbientFlat focal_flat(const LeafData& data, const Eigen::VectorXcd& covector, double tol) {
  const int l = data.l();
  AmbientFlat out;
  const Complex c0 = covector(0);
  const Eigen::VectorXcd c = covector.tail(l);
  const double cn = c.norm();
  if (cn <= tol * std::abs(c0) || cn == 0.0) {
    out.at_infinity = true;
    out.point = data.base_point;
    out.directions = data.leaf_dirs;
    return out;
  }
  // Minimum-norm t with c . t = -c0.
  const Eigen::VectorXcd t = -c0 * c.conjugate() / (cn * cn);
  out.point = data.base_point + data.leaf_dirs * t;
  Eigen::MatrixXcd row(1, l);
  row.row(0) = c.transpose();
  out.directions = data.leaf_dirs * null_space(row, l - 1);
  return out;
}

double distance_from_infinity(const Eigen::VectorXcd& covector) {
  return projective_distance(covector, Eigen::VectorXcd::Unit(covector.size(), 0));
}

} // namespace affcyl
