// graph.hpp -- undirected simple graph, sensitive-group labels, loaders
#pragma once

#include <Eigen/SparseCore>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fairclust {

using SparseMatrixD = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Canonical form: first < second.
using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Undirected simple graph with a symmetric binary adjacency and zero
// diagonal. Immutable after construction; safe to share across threads.
class Graph {
 public:
  // Canonicalizes and deduplicates edges. Rejects self-loops, out-of-range
  // endpoints, and n == 0.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const SparseMatrixD& adjacency() const { return adjacency_; }
  const std::vector<std::size_t>& degrees() const { return degrees_; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;  // sorted, unique
  SparseMatrixD adjacency_;
  std::vector<std::size_t> degrees_;
};

// Per-node sensitive-group labels. Group ids are dense 0..m-1 and every
// group is nonempty.
class GroupAssignment {
 public:
  // `labels` may use arbitrary nonnegative ids; they are densified in
  // first-appearance order.
  explicit GroupAssignment(const std::vector<std::uint32_t>& labels);

  std::size_t size() const { return labels_.size(); }
  std::uint32_t label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }
  std::uint32_t group_count() const { return m_; }
  const std::vector<std::size_t>& group_sizes() const { return group_sizes_; }

 private:
  std::vector<std::uint32_t> labels_;
  std::uint32_t m_ = 0;
  std::vector<std::size_t> group_sizes_;
};

// Cluster ids in [0, k). Clusters may be empty; that is recorded, not an
// error. k >= 2 always.
class ClusterLabels {
 public:
  ClusterLabels(std::vector<std::uint32_t> labels, std::uint32_t k);

  std::size_t size() const { return labels_.size(); }
  std::uint32_t label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::uint32_t>& labels() const { return labels_; }
  std::uint32_t cluster_count() const { return k_; }
  std::vector<std::size_t> cluster_sizes() const;

 private:
  std::vector<std::uint32_t> labels_;
  std::uint32_t k_ = 0;
};

// Structural report for an adjacency-like matrix. Pure data; callers decide
// what is fatal.
struct Diagnostics {
  bool symmetric = true;
  std::vector<std::pair<std::size_t, std::size_t>> asymmetric_positions;  // capped
  std::vector<std::size_t> self_loops;
  std::vector<std::pair<std::size_t, std::size_t>> non_binary_positions;  // capped
  std::vector<std::size_t> isolated_nodes;
  std::size_t component_count = 0;
  std::string summary() const;
};

// Edge-list text format: "u v" per line, '#' comment lines and blank lines
// ignored. Node count is max id + 1, or n_hint if larger; gaps in ids
// become isolated nodes. Rejects self-loops (with line number), non-integer
// tokens, weight columns, and empty input.
Graph load_edge_list(std::istream& in, std::optional<std::size_t> n_hint = std::nullopt);

void save_edge_list(const Graph& g, std::ostream& out);

// Group file: one token per line, i-th token = group of node i. Blank and
// '#' comment lines are skipped. Token count must equal n.
GroupAssignment load_groups(std::istream& in, std::size_t n);

Diagnostics validate(const SparseMatrixD& a);
Diagnostics validate(const Graph& g);

}  // namespace fairclust
