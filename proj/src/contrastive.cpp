#include "fairclust/contrastive.hpp"

#include "fairclust/errors.hpp"

namespace fairclust {

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_raw_indicators(const GroupAssignment& groups,
                                                                 const ContrastiveOptions& opts) {
  const auto n = static_cast<Eigen::Index>(groups.size());
  Eigen::MatrixXd n_raw = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd p_raw = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::uint32_t gi = groups.label(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j && !opts.include_diagonal) continue;
      if (gi == groups.label(static_cast<std::size_t>(j))) {
        n_raw(i, j) = 1.0;
      } else {
        p_raw(i, j) = 1.0;
      }
    }
  }
  return {std::move(n_raw), std::move(p_raw)};
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double sum = out.row(i).sum();
    if (sum > 0.0) out.row(i) /= sum;
    // all-zero rows stay all-zero
  }
  return out;
}

ContrastiveSystem build_contrastive(const GroupAssignment& groups, const ContrastiveOptions& opts) {
  auto [n_raw, p_raw] = build_raw_indicators(groups, opts);
  ContrastiveSystem sys;
  sys.single_group = groups.group_count() == 1;
  sys.C = normalize_rows(p_raw) - normalize_rows(n_raw);
  const Eigen::VectorXd row_sums = sys.C.rowwise().sum();
  sys.L = -sys.C;
  sys.L.diagonal() += row_sums;
  sys.Lplus = sys.L.cwiseMax(0.0);
  sys.Lminus = (-sys.L).cwiseMax(0.0);
  return sys;
}

double regularizer_value(const Eigen::MatrixXd& h, const Eigen::MatrixXd& laplacian) {
  if (laplacian.rows() != laplacian.cols() || laplacian.cols() != h.rows()) {
    throw ValidationError("regularizer_value: dimension mismatch (L is " +
                          std::to_string(laplacian.rows()) + "x" + std::to_string(laplacian.cols()) +
                          ", H has " + std::to_string(h.rows()) + " rows)");
  }
  // Tr(H^T (L H)) = sum_ij H_ij (LH)_ij
  return (h.array() * (laplacian * h).array()).sum();
}

}  // namespace fairclust
