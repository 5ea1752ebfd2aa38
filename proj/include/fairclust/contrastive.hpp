// contrastive.hpp -- signed contrast graph C = P - N and its Laplacian split
#pragma once

#include <Eigen/Dense>

#include <utility>

#include "fairclust/graph.hpp"

namespace fairclust {

struct ContrastiveOptions {
  // Keep the indicator diagonal (every node is same-group with itself).
  // The diagonal contributes a self-repulsion term that damps the H update;
  // without it the solver has no stable regime where the regularizer can
  // move labels: assignments stay put until the iteration diverges. The
  // zero-diagonal variant stays available for comparison.
  bool include_diagonal = true;
};

// C couples every node pair by group membership: positive weight between
// different-group pairs (attraction), negative between same-group pairs
// (repulsion). L = D - C with D the diagonal of row sums of C, split into
// nonnegative parts L = Lplus - Lminus with disjoint supports.
//
// Matrices are stored dense; intended for n up to ~20000.
struct ContrastiveSystem {
  Eigen::MatrixXd C;
  Eigen::MatrixXd L;
  Eigen::MatrixXd Lplus;
  Eigen::MatrixXd Lminus;
  bool single_group = false;  // m == 1: P is all zeros, pure repulsion
};

// 0/1 indicator matrices: N_raw marks same-group pairs, P_raw marks
// different-group pairs. Returned in (N_raw, P_raw) order.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_raw_indicators(
    const GroupAssignment& groups, const ContrastiveOptions& opts = {});

// Divides each row by its sum; all-zero rows stay all-zero.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& m);

ContrastiveSystem build_contrastive(const GroupAssignment& groups,
                                    const ContrastiveOptions& opts = {});

// Tr(H^T L H). The trace form is the normative value; the pairwise-sum
// form over unordered pairs agrees only when C is symmetric.
double regularizer_value(const Eigen::MatrixXd& h, const Eigen::MatrixXd& laplacian);

}  // namespace fairclust
