#include "affcyl/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace affcyl {

std::vector<double> singular_values(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

RankDecision numerical_rank(const Eigen::MatrixXcd& a, double tol_rel, double abs_floor) {
  RankDecision out;
  out.sigmas = singular_values(a);
  if (out.sigmas.empty() || out.sigmas.front() <= abs_floor) {
    out.rank = 0;
    return out;
  }
  const double cut = tol_rel * out.sigmas.front();
  out.rank = static_cast<int>(std::count_if(out.sigmas.begin(), out.sigmas.end(), [&](double s) { return s >= cut; }));
  if (out.rank < static_cast<int>(out.sigmas.size()) && out.sigmas[out.rank] > 0.0)
    out.gap_ratio = out.sigmas[out.rank - 1] / out.sigmas[out.rank];
  out.determined = out.gap_ratio >= kMinGapRatio;
  return out;
}

double condition_number(const Eigen::MatrixXcd& a) {
  auto s = singular_values(a);
  if (s.empty()) return 1.0;
  if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
  return s.front() / s.back();
}

Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& a, double tol_rel) {
  if (a.cols() == 0) return Eigen::MatrixXcd(a.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s(rank) > tol_rel * s(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXcd orthonormal_complement(const Eigen::MatrixXcd& basis) {
  const Eigen::Index N = basis.rows();
  const Eigen::MatrixXcd q = orthonormal_basis(basis);
  const Eigen::Index want = N - q.cols();
  Eigen::MatrixXcd out(N, want);
  Eigen::Index found = 0;
  std::vector<bool> used(N, false);
  // Sweeps with a decreasing acceptance threshold; the first sweep settles
  // every practical case.
  for (double threshold = 0.3; found < want && threshold > 1e-8; threshold *= 0.1) {
    for (Eigen::Index k = 0; k < N && found < want; ++k) {
      if (used[k]) continue;
      Eigen::VectorXcd v = Eigen::VectorXcd::Unit(N, k);
      for (int pass = 0; pass < 2; ++pass) {
        v -= q * (q.adjoint() * v);
        if (found > 0) v -= out.leftCols(found) * (out.leftCols(found).adjoint() * v);
      }
      const double norm = v.norm();
      if (norm > threshold) {
        out.col(found++) = v / norm;
        used[k] = true;
      }
    }
  }
  return out.leftCols(found);
}

Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& a, int dim) {
  const Eigen::Index n = a.cols();
  if (dim <= 0) return Eigen::MatrixXcd(n, 0);
  if (a.rows() == 0) return Eigen::MatrixXcd::Identity(n, n).rightCols(dim);
  // Pad to at least n rows so that the full V is well defined.
  Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(std::max(a.rows(), n), n);
  padded.topRows(a.rows()) = a;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(padded, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(dim);
}

double subspace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::MatrixXcd qa = orthonormal_basis(a);
  const Eigen::MatrixXcd qb = orthonormal_basis(b);
  if (qa.cols() != qb.cols()) return 1.0;
  if (qa.cols() == 0) return 0.0;
  const Eigen::MatrixXcd r = qb - qa * (qa.adjoint() * qb);
  auto s = singular_values(r);
  return std::min(1.0, s.front());
}

double projective_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  const Eigen::VectorXcd r = b - a * (a.dot(b) / (na * na));
  return std::min(1.0, r.norm() / nb);
}

Eigen::VectorXcd to_vector(std::span<const Complex> v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

std::vector<Complex> to_std(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

double max_abs(const Eigen::MatrixXcd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

} // namespace affcyl
