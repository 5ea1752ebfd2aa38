#include "fairclust/solver.hpp"

#include <chrono>
#include <cmath>

#include "fairclust/errors.hpp"
#include "fairclust/rng.hpp"
#include "fairclust/version.hpp"

namespace fairclust {

namespace {

void check_factor_dims(const SparseMatrixD& a, const Eigen::MatrixXd& h,
                       const Eigen::MatrixXd& w, const char* where) {
  if (a.rows() != a.cols() || a.rows() != h.rows() || h.cols() != w.rows() ||
      w.rows() != w.cols()) {
    throw ValidationError(std::string(where) + ": dimension mismatch (A " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", H " +
                          std::to_string(h.rows()) + "x" + std::to_string(h.cols()) + ", W " +
                          std::to_string(w.rows()) + "x" + std::to_string(w.cols()) + ")");
  }
}

}  // namespace

double objective(const SparseMatrixD& a, const Eigen::MatrixXd& h, const Eigen::MatrixXd& w,
                 const Eigen::MatrixXd& laplacian, double lambda) {
  check_factor_dims(a, h, w, "objective");
  if (!h.allFinite() || !w.allFinite()) {
    throw NumericError("objective: non-finite factor entries");
  }
  // Frobenius term, one reconstruction row at a time to avoid an n x n
  // temporary.
  const Eigen::MatrixXd hw = h * w;  // n x k
  const Eigen::Index n = a.rows();
  double frob = 0.0;
  Eigen::RowVectorXd row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    row.noalias() = hw.row(i) * h.transpose();
    for (SparseMatrixD::InnerIterator it(a, i); it; ++it) {
      row(it.col()) -= it.value();
    }
    frob += row.squaredNorm();
  }
  double loss = frob;
  if (lambda != 0.0) {
    loss += lambda * regularizer_value(h, laplacian);
  }
  if (!std::isfinite(loss)) {
    throw NumericError("objective: loss is not finite");
  }
  return loss;
}

Eigen::MatrixXd update_h(const SparseMatrixD& a, const Eigen::MatrixXd& h,
                         const Eigen::MatrixXd& w, const Eigen::MatrixXd& lplus,
                         const Eigen::MatrixXd& lminus, double lambda, double eps,
                         double exponent) {
  check_factor_dims(a, h, w, "update_h");
  const Eigen::MatrixXd hw = h * w;
  const Eigen::MatrixXd hwt = h * w.transpose();
  const Eigen::MatrixXd gram = h.transpose() * h;  // k x k

  Eigen::MatrixXd num = a.transpose() * hw + a * hwt;
  Eigen::MatrixXd den = h * (w.transpose() * gram * w) + h * (w * gram * w.transpose());
  if (lambda != 0.0) {
    num.noalias() += lambda * (lminus * h);
    den.noalias() += lambda * (lplus * h);
  }
  Eigen::MatrixXd out =
      h.array() * (num.array() / (den.array() + eps)).pow(exponent);
  if (!out.allFinite()) {
    throw NumericError("update_h produced non-finite values; check the eps guard");
  }
  return out;
}

Eigen::MatrixXd update_w(const SparseMatrixD& a, const Eigen::MatrixXd& h,
                         const Eigen::MatrixXd& w, double eps) {
  check_factor_dims(a, h, w, "update_w");
  const Eigen::MatrixXd gram = h.transpose() * h;
  const Eigen::MatrixXd num = h.transpose() * (a * h);
  const Eigen::MatrixXd den = gram * w * gram;
  Eigen::MatrixXd out = w.array() * (num.array() / (den.array() + eps));
  if (!out.allFinite()) {
    throw NumericError("update_w produced non-finite values; check the eps guard");
  }
  return out;
}

FactorPair initialize(std::size_t n, int k, std::uint64_t seed, double scale) {
  if (k < 2) {
    throw ValidationError("initialize: k must be >= 2, got " + std::to_string(k));
  }
  if (static_cast<std::size_t>(k) > n) {
    throw ValidationError("initialize: k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
  }
  Rng rng(seed);
  FactorPair fp;
  fp.H.resize(static_cast<Eigen::Index>(n), k);
  for (Eigen::Index i = 0; i < fp.H.rows(); ++i) {
    for (Eigen::Index j = 0; j < fp.H.cols(); ++j) {
      fp.H(i, j) = 0.01 + scale * rng.uniform();
    }
  }
  fp.W = Eigen::MatrixXd::Constant(k, k, 0.01);
  fp.W.diagonal().array() += 1.0;
  return fp;
}

ClusterLabels assign_clusters(const Eigen::MatrixXd& h, std::vector<std::string>* warnings) {
  const auto n = static_cast<std::size_t>(h.rows());
  const auto k = static_cast<std::uint32_t>(h.cols());
  std::vector<std::uint32_t> labels(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    double best_val = h(static_cast<Eigen::Index>(i), 0);
    for (Eigen::Index j = 1; j < h.cols(); ++j) {
      if (h(static_cast<Eigen::Index>(i), j) > best_val) {  // strict: ties keep lowest index
        best_val = h(static_cast<Eigen::Index>(i), j);
        best = j;
      }
    }
    if (best_val == 0.0) {  // H >= 0, so a zero max means an all-zero row
      if (warnings) {
        warnings->push_back("node " + std::to_string(i) +
                            " has an all-zero membership row; assigned cluster 0");
      }
      best = 0;
    }
    labels[i] = static_cast<std::uint32_t>(best);
  }
  return ClusterLabels(std::move(labels), k);
}

RunResult fit(const Graph& graph, const GroupAssignment& groups, const SolverConfig& config) {
  const std::size_t n = graph.node_count();
  if (groups.size() != n) {
    throw ValidationError("fit: group assignment has " + std::to_string(groups.size()) +
                          " labels for " + std::to_string(n) + " nodes");
  }
  if (config.k < 2 || static_cast<std::size_t>(config.k) > n) {
    throw ValidationError("fit: k must satisfy 2 <= k <= n, got k=" + std::to_string(config.k) +
                          ", n=" + std::to_string(n));
  }
  if (config.lambda < 0.0) {
    throw ValidationError("fit: lambda must be >= 0");
  }
  if (config.max_iters < 0 || config.tol < 0.0 || config.eps <= 0.0) {
    throw ValidationError("fit: max_iters, tol must be >= 0 and eps > 0");
  }

  const auto t0 = std::chrono::steady_clock::now();
  RunResult result{.factors = {},
                   .labels = ClusterLabels(std::vector<std::uint32_t>(n, 0), 2),
                   .loss_trace = {},
                   .iterations = 0,
                   .manifest = {},
                   .warnings = {}};

  // lambda == 0 and a disabled regularizer must follow the same code path,
  // so the contrastive system is only built when it can contribute.
  const double lambda = config.use_regularizer ? config.lambda : 0.0;
  if (!config.use_regularizer && config.lambda != 0.0) {
    result.warnings.push_back("regularizer disabled; ignoring lambda=" +
                              std::to_string(config.lambda));
  }
  Eigen::MatrixXd lap, lplus, lminus;
  if (lambda != 0.0) {
    ContrastiveSystem sys = build_contrastive(groups, {.include_diagonal = config.include_diagonal});
    if (sys.single_group) {
      result.warnings.push_back(
          "single sensitive group: the attraction component P is all zeros (pure repulsion)");
    }
    lap = std::move(sys.L);
    lplus = std::move(sys.Lplus);
    lminus = std::move(sys.Lminus);
  }

  FactorPair factors =
      config.init ? *config.init : initialize(n, config.k, config.seed);
  if (factors.H.rows() != static_cast<Eigen::Index>(n) || factors.H.cols() != config.k ||
      factors.W.rows() != config.k || factors.W.cols() != config.k) {
    throw ValidationError("fit: provided factors do not match n=" + std::to_string(n) +
                          ", k=" + std::to_string(config.k));
  }

  const SparseMatrixD& a = graph.adjacency();
  double loss = objective(a, factors.H, factors.W, lap, lambda);
  result.loss_trace.push_back(loss);

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    factors.H = update_h(a, factors.H, factors.W, lplus, lminus, lambda, config.eps,
                         config.update_exponent);
    factors.W = update_w(a, factors.H, factors.W, config.eps);
    const double prev = loss;
    loss = objective(a, factors.H, factors.W, lap, lambda);
    result.loss_trace.push_back(loss);
    result.iterations = iter;
    if (loss > prev) {
      result.warnings.push_back("loss increased at iteration " + std::to_string(iter) + " (" +
                                std::to_string(prev) + " -> " + std::to_string(loss) + ")");
    }
    const double rel_change = std::abs(loss - prev) / std::max(prev, config.eps);
    if (rel_change < config.tol) break;
  }

  result.labels = assign_clusters(factors.H, &result.warnings);
  result.factors = std::move(factors);

  const auto t1 = std::chrono::steady_clock::now();
  result.manifest.seed = config.seed;
  result.manifest.k = config.k;
  result.manifest.lambda = config.lambda;
  result.manifest.iterations = result.iterations;
  result.manifest.final_loss = loss;
  result.manifest.wall_time_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  result.manifest.tolerance = config.tol;
  result.manifest.version = kVersion;
  return result;
}

}  // namespace fairclust
