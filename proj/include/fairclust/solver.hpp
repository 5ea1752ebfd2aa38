// solver.hpp -- multiplicative-update optimizer for the fairness-regularized
// symmetric tri-factorization A ~ H W H^T
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairclust/contrastive.hpp"
#include "fairclust/graph.hpp"

namespace fairclust {

struct FactorPair {
  Eigen::MatrixXd H;  // n x k node-to-cluster membership
  Eigen::MatrixXd W;  // k x k cluster-cluster interaction strengths
};

struct SolverConfig {
  int k = 2;
  double lambda = 0.0;   // fairness trade-off, >= 0
  int max_iters = 500;
  double tol = 1e-6;     // relative loss-change stopping threshold
  double eps = 1e-10;    // denominator guard
  std::uint64_t seed = 0;
  bool use_regularizer = true;   // false: contrastive code path disabled entirely
  bool include_diagonal = true;  // forwarded to build_contrastive
  double update_exponent = 0.25;  // damping exponent of the H rule; 0.5 for ablation
  std::optional<FactorPair> init;  // overrides seeded initialization when set
};

struct RunManifest {
  std::uint64_t seed = 0;
  int k = 0;
  double lambda = 0.0;
  int iterations = 0;
  double final_loss = 0.0;
  double wall_time_ms = 0.0;
  double tolerance = 0.0;
  std::string version;
};

struct RunResult {
  FactorPair factors;
  ClusterLabels labels;
  std::vector<double> loss_trace;  // length = iterations + 1, starts at the initial loss
  int iterations = 0;
  RunManifest manifest;
  std::vector<std::string> warnings;
};

// Full loss: ||A - H W H^T||_F^2 + lambda * Tr(H^T L H). The Laplacian may
// be empty when lambda == 0.
double objective(const SparseMatrixD& a, const Eigen::MatrixXd& h, const Eigen::MatrixXd& w,
                 const Eigen::MatrixXd& laplacian, double lambda);

// One multiplicative step on H:
//   H <- H .* ((A^T H W + A H W^T + lambda L^- H) /
//              (H W^T H^T H W + H W H^T H W^T + lambda L^+ H + eps)) .^ exponent
// Entries that are exactly 0 stay 0. Throws NumericError if the result is
// not finite (eps misconfiguration).
Eigen::MatrixXd update_h(const SparseMatrixD& a, const Eigen::MatrixXd& h,
                         const Eigen::MatrixXd& w, const Eigen::MatrixXd& lplus,
                         const Eigen::MatrixXd& lminus, double lambda, double eps,
                         double exponent = 0.25);

// One multiplicative step on W:
//   W <- W .* (H^T A H) / (H^T H W H^T H + eps)
Eigen::MatrixXd update_w(const SparseMatrixD& a, const Eigen::MatrixXd& h,
                         const Eigen::MatrixXd& w, double eps);

// H entries i.i.d. uniform on (0.01, 0.01 + scale); W = I + 0.01 on every
// entry. Strictly positive so no entry is locked at zero before structure
// emerges. Deterministic given seed; H is filled row-major.
FactorPair initialize(std::size_t n, int k, std::uint64_t seed, double scale = 1.0);

// Row-wise argmax; ties broken toward the lowest cluster index. All-zero
// rows get cluster 0 and a warning.
ClusterLabels assign_clusters(const Eigen::MatrixXd& h,
                              std::vector<std::string>* warnings = nullptr);

// Alternates update_h / update_w until max_iters or the relative loss
// change drops below tol.
RunResult fit(const Graph& graph, const GroupAssignment& groups, const SolverConfig& config);

}  // namespace fairclust
