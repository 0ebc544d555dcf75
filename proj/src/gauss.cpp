#include "affcyl/gauss.hpp"

#include <algorithm>
#include <map>

#include "affcyl/error.hpp"

namespace affcyl {

TangentFrame tangent_frame(const Jet2& jet) {
  const int N = jet.n_out();
  const int n = jet.n_params();
  if (N < n + 1) throw InvalidSpec("codimension must be at least 1 (N = " + std::to_string(N) + ", n = " + std::to_string(n) + ")");
  auto s = singular_values(jet.d1);
  if (s.empty() || s.front() == 0.0 || s.back() < kImmersionTol * s.front())
    throw NotImmersed("tangent vectors are numerically dependent");
  return {jet.value, jet.d1, orthonormal_complement(jet.d1)};
}

int count_independent_forms(std::span<const Eigen::MatrixXcd> forms, double tol_rel, double scale) {
  if (forms.empty()) return 0;
  const Eigen::Index n = forms.front().rows();
  Eigen::MatrixXcd stack(n * n, static_cast<Eigen::Index>(forms.size()));
  for (std::size_t a = 0; a < forms.size(); ++a)
    stack.col(static_cast<Eigen::Index>(a)) = forms[a].reshaped();
  return numerical_rank(stack, tol_rel, 1e-12 * scale).rank;
}

SecondForms second_forms(const Jet2& jet, const TangentFrame& frame, double tol_rel) {
  const int n = jet.n_params();
  const int N = jet.n_out();
  SecondForms out;
  double scale = 1.0;
  for (const auto& h : jet.d2) scale = std::max(scale, max_abs(h));
  out.scale = scale;
  for (Eigen::Index a = 0; a < frame.normal_basis.cols(); ++a) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < N; ++k) b += std::conj(frame.normal_basis(k, a)) * jet.d2[k];
    out.forms.push_back(std::move(b));
  }
  out.m = count_independent_forms(out.forms, tol_rel, scale);
  return out;
}

GaussRank gauss_rank(const SecondForms& forms, double tol_rel) {
  GaussRank out;
  if (forms.forms.empty()) {
    out.r = 0;
    return out;
  }
  const Eigen::Index n = forms.forms.front().rows();
  Eigen::MatrixXcd stack(n * static_cast<Eigen::Index>(forms.forms.size()), n);
  for (std::size_t a = 0; a < forms.forms.size(); ++a) stack.middleRows(static_cast<Eigen::Index>(a) * n, n) = forms.forms[a];
  out.decision = numerical_rank(stack, tol_rel, 1e-12 * forms.scale);
  out.r = out.decision.rank;
  out.kernel_basis = null_space(stack, static_cast<int>(n) - out.r);
  return out;
}

RankProfile rank_profile(const ExprMap& map, std::span<const std::vector<Complex>> samples, double tol_rel) {
  RankProfile out;
  std::map<int, int> votes;
  for (const auto& u : samples) {
    RankSample s;
    s.u = u;
    try {
      const Jet2 jet = eval_jet2(map, u);
      const TangentFrame frame = tangent_frame(jet);
      const GaussRank g = gauss_rank(second_forms(jet, frame, tol_rel), tol_rel);
      s.r = g.r;
      s.sigmas = g.decision.sigmas;
      s.gap_ratio = g.decision.gap_ratio;
      s.determined = g.decision.determined;
      ++votes[s.r];
    } catch (const NotImmersed& e) {
      s.immersed = false;
      s.error = e.what();
    } catch (const DomainError& e) {
      s.immersed = false;
      s.error = e.what();
    }
    out.per_sample.push_back(std::move(s));
  }
  int best = 0;
  for (auto [r, count] : votes)
    if (count > best) {
      best = count;
      out.r = r;
    }
  for (std::size_t i = 0; i < out.per_sample.size(); ++i) {
    const auto& s = out.per_sample[i];
    if (!s.immersed || !s.determined || s.r != out.r) out.violations.push_back(i);
  }
  out.constant = !out.per_sample.empty() && out.violations.empty();
  return out;
}

} // namespace affcyl
