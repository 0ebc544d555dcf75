#include "affcyl/frames.hpp"

#include <algorithm>

#include "affcyl/error.hpp"
#include "affcyl/jet.hpp"

namespace affcyl {

LeafData extract_leaf_data(const RuledSpec& spec, std::span<const Complex> u, double tol_rank) {
  const int r = spec.r, l = spec.l, N = spec.N, n = spec.n();
  const Jet2 base = eval_jet2(spec.base, u);
  std::vector<Jet2> gens;
  gens.reserve(l);
  for (const auto& g : spec.generators) gens.push_back(eval_jet2(g, u));

  LeafData out;
  out.u.assign(u.begin(), u.end());
  out.base_point = base.value;
  out.leaf_dirs.resize(N, l);
  for (int a = 0; a < l; ++a) out.leaf_dirs.col(a) = gens[a].value;
  out.complement = base.d1;

  Eigen::MatrixXcd frame(N, n);
  frame << out.leaf_dirs, out.complement;
  const auto sigmas = singular_values(frame);
  if (sigmas.front() == 0.0 || sigmas.back() < 1e-13 * sigmas.front())
    throw SingularBasePoint("tangent rank below n at the base point");
  out.frame_condition = sigmas.front() / sigmas.back();
  if (out.frame_condition > kMaxFrameCondition)
    throw FrameIllConditioned("frame condition number " + std::to_string(out.frame_condition));
  out.normals = orthonormal_complement(frame);

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(frame);
  out.C.push_back(Eigen::MatrixXcd::Identity(r, r));
  for (int a = 0; a < l; ++a) {
    Eigen::MatrixXcd c(r, r);
    for (int q = 0; q < r; ++q) {
      const Eigen::VectorXcd v = gens[a].d1.col(q);
      const Eigen::VectorXcd z = qr.solve(v);
      c.col(q) = z.tail(r);
      const double scale = std::max(1.0, v.norm());
      out.tangency_residual = std::max(out.tangency_residual, (v - frame * z).norm() / scale);
    }
    out.C.push_back(std::move(c));
  }

  double scale = 1.0;
  for (const auto& h : base.d2) scale = std::max(scale, max_abs(h));
  out.form_scale = scale;
  for (Eigen::Index alpha = 0; alpha < out.normals.cols(); ++alpha) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(r, r);
    for (int k = 0; k < N; ++k) b += std::conj(out.normals(k, alpha)) * base.d2[k];
    out.B.push_back(std::move(b));
  }
  out.m = count_independent_forms(out.B, tol_rank, scale);
  refresh_products(out);
  return out;
}

void refresh_products(LeafData& data) {
  data.H.assign(data.B.size(), {});
  for (std::size_t alpha = 0; alpha < data.B.size(); ++alpha)
    for (const auto& c : data.C) data.H[alpha].push_back(data.B[alpha] * c);
}

BasicEquationsReport check_basic_equations(const LeafData& data, double tol) {
  BasicEquationsReport out;
  for (std::size_t alpha = 0; alpha < data.B.size(); ++alpha) {
    for (std::size_t i = 0; i < data.C.size(); ++i) {
      const Eigen::MatrixXcd h = data.B[alpha] * data.C[i];
      const double res = max_abs(h - h.transpose());
      if (res > out.residual || out.worst_alpha < 0) {
        out.residual = std::max(out.residual, res);
        out.worst_alpha = static_cast<int>(alpha);
        out.worst_index = static_cast<int>(i);
      }
    }
  }
  out.pass = out.residual <= tol;
  return out;
}

SecondOrderProfile second_order_profile(const LeafData& data, double tol_rel) {
  const int m = count_independent_forms(data.B, tol_rel, data.form_scale);
  return {m, data.r() + data.l() + m};
}

SecondForms leaf_forms(const LeafData& data) { return {data.B, data.m, data.form_scale}; }

} // namespace affcyl
