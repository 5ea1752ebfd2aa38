// metrics.hpp -- clustering quality (modularity, accuracy) and fairness
// (average balance, neighbor-proportionality rho)
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairclust/graph.hpp"

namespace fairclust {

struct MetricsReport {
  double modularity = 0.0;
  std::optional<double> avg_balance;        // unset when the data has a single group
  std::vector<double> per_cluster_balance;  // empty when avg_balance is unset
  std::optional<double> accuracy;           // set only when ground truth is given
  double rho_avg = 0.0;
  std::vector<std::size_t> cluster_sizes;
  std::vector<std::vector<std::size_t>> group_by_cluster;  // k x m contingency
  std::vector<std::string> warnings;
};

// Minimum over ordered pairs of distinct groups of the count ratio, which
// equals min count / max count. Any absent group (or an empty cluster)
// gives 0. Requires at least two groups in the data.
double balance_of_cluster(const std::vector<std::size_t>& group_counts);
double balance_of_cluster(const std::vector<std::uint32_t>& members,
                          const GroupAssignment& groups);

// Arithmetic mean over all k clusters; empty clusters count as 0.
std::pair<double, std::vector<double>> average_balance(const ClusterLabels& labels,
                                                       const GroupAssignment& groups);

// Newman modularity Q = sum_c [ e_c/m - (d_c/(2m))^2 ]. Requires >= 1 edge.
double modularity(const Graph& graph, const ClusterLabels& labels);

// Fraction of nodes matched under the best cluster-label matching of the
// confusion matrix (exact assignment for k <= 10, greedy with a warning
// beyond that).
double accuracy(const ClusterLabels& labels, const ClusterLabels& truth);

// Per node: min/max ratio of one-hop-neighbor counts across clusters, 0 if
// any cluster holds no neighbor. Isolated nodes get NaN and are excluded
// from the average; an edgeless graph yields 0.
std::pair<double, std::vector<double>> rho_fairness(const Graph& graph,
                                                    const ClusterLabels& labels);

MetricsReport compute_metrics(const Graph& graph, const ClusterLabels& labels,
                              const GroupAssignment& groups,
                              const ClusterLabels* truth = nullptr);

std::string metrics_to_json(const MetricsReport& report);  // pretty-printed object
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& report);

}  // namespace fairclust
