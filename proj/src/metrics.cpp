#include "fairclust/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "fairclust/errors.hpp"
#include "fairclust/io.hpp"

namespace fairclust {

namespace {

// Min-cost assignment on a square matrix via shortest augmenting paths
// (Kuhn-Munkres with potentials). Returns row -> column.
std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j]) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

std::vector<std::vector<std::size_t>> contingency(const ClusterLabels& labels,
                                                  const GroupAssignment& groups) {
  std::vector<std::vector<std::size_t>> table(
      labels.cluster_count(), std::vector<std::size_t>(groups.group_count(), 0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ++table[labels.label(i)][groups.label(i)];
  }
  return table;
}

}  // namespace

double balance_of_cluster(const std::vector<std::size_t>& group_counts) {
  if (group_counts.size() < 2) {
    throw ValidationError("balance requires at least two sensitive groups");
  }
  const auto [mn, mx] = std::minmax_element(group_counts.begin(), group_counts.end());
  if (*mx == 0) return 0.0;  // empty cluster
  if (*mn == 0) return 0.0;  // some group absent
  return static_cast<double>(*mn) / static_cast<double>(*mx);
}

double balance_of_cluster(const std::vector<std::uint32_t>& members,
                          const GroupAssignment& groups) {
  if (groups.group_count() < 2) {
    throw ValidationError("balance requires at least two sensitive groups");
  }
  std::vector<std::size_t> counts(groups.group_count(), 0);
  for (std::uint32_t node : members) {
    if (node >= groups.size()) {
      throw ValidationError("balance_of_cluster: node " + std::to_string(node) + " out of range");
    }
    ++counts[groups.label(node)];
  }
  return balance_of_cluster(counts);
}

std::pair<double, std::vector<double>> average_balance(const ClusterLabels& labels,
                                                       const GroupAssignment& groups) {
  if (labels.size() != groups.size()) {
    throw ValidationError("average_balance: label/group length mismatch");
  }
  if (groups.group_count() < 2) {
    throw ValidationError("balance requires at least two sensitive groups");
  }
  const auto table = contingency(labels, groups);
  std::vector<double> per_cluster(labels.cluster_count(), 0.0);
  double sum = 0.0;
  for (std::uint32_t c = 0; c < labels.cluster_count(); ++c) {
    per_cluster[c] = balance_of_cluster(table[c]);
    sum += per_cluster[c];
  }
  return {sum / static_cast<double>(labels.cluster_count()), std::move(per_cluster)};
}

double modularity(const Graph& graph, const ClusterLabels& labels) {
  if (labels.size() != graph.node_count()) {
    throw ValidationError("modularity: label count does not match node count");
  }
  const double m = static_cast<double>(graph.edge_count());
  if (m == 0.0) {
    throw ValidationError("modularity is undefined for an edgeless graph");
  }
  std::vector<double> intra_edges(labels.cluster_count(), 0.0);
  std::vector<double> degree_sum(labels.cluster_count(), 0.0);
  for (const auto& [u, v] : graph.edges()) {
    if (labels.label(u) == labels.label(v)) {
      intra_edges[labels.label(u)] += 1.0;
    }
  }
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    degree_sum[labels.label(i)] += static_cast<double>(graph.degrees()[i]);
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < labels.cluster_count(); ++c) {
    const double frac = degree_sum[c] / (2.0 * m);
    q += intra_edges[c] / m - frac * frac;
  }
  return q;
}

double accuracy(const ClusterLabels& labels, const ClusterLabels& truth) {
  if (labels.size() != truth.size()) {
    throw ValidationError("accuracy: length mismatch (" + std::to_string(labels.size()) + " vs " +
                          std::to_string(truth.size()) + ")");
  }
  const std::size_t n = labels.size();
  const std::uint32_t k = std::max(labels.cluster_count(), truth.cluster_count());
  std::vector<std::vector<double>> confusion(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    confusion[labels.label(i)][truth.label(i)] += 1.0;
  }
  double matched = 0.0;
  if (k <= 10) {
    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
    for (std::uint32_t i = 0; i < k; ++i) {
      for (std::uint32_t j = 0; j < k; ++j) cost[i][j] = -confusion[i][j];
    }
    const std::vector<int> match = hungarian_min_cost(cost);
    for (std::uint32_t i = 0; i < k; ++i) matched += confusion[i][match[i]];
  } else {
    // Greedy matching: repeatedly take the largest remaining confusion cell.
    std::cerr << "warning: k=" << k << " > 10, using greedy label matching for accuracy\n";
    std::vector<bool> row_used(k, false), col_used(k, false);
    for (std::uint32_t step = 0; step < k; ++step) {
      double best = -1.0;
      std::uint32_t bi = 0, bj = 0;
      for (std::uint32_t i = 0; i < k; ++i) {
        if (row_used[i]) continue;
        for (std::uint32_t j = 0; j < k; ++j) {
          if (col_used[j]) continue;
          if (confusion[i][j] > best) {
            best = confusion[i][j];
            bi = i;
            bj = j;
          }
        }
      }
      row_used[bi] = true;
      col_used[bj] = true;
      matched += best;
    }
  }
  return matched / static_cast<double>(n);
}

std::pair<double, std::vector<double>> rho_fairness(const Graph& graph,
                                                    const ClusterLabels& labels) {
  if (labels.size() != graph.node_count()) {
    throw ValidationError("rho_fairness: label count does not match node count");
  }
  const std::size_t n = graph.node_count();
  const std::uint32_t k = labels.cluster_count();
  std::vector<std::vector<std::size_t>> neighbor_counts(n, std::vector<std::size_t>(k, 0));
  for (const auto& [u, v] : graph.edges()) {
    ++neighbor_counts[u][labels.label(v)];
    ++neighbor_counts[v][labels.label(u)];
  }
  std::vector<double> per_node(n, std::numeric_limits<double>::quiet_NaN());
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (graph.degrees()[i] == 0) continue;  // undefined, excluded from the average
    const auto [mn, mx] =
        std::minmax_element(neighbor_counts[i].begin(), neighbor_counts[i].end());
    per_node[i] = (*mn == 0) ? 0.0 : static_cast<double>(*mn) / static_cast<double>(*mx);
    sum += per_node[i];
    ++counted;
  }
  const double avg = counted ? sum / static_cast<double>(counted) : 0.0;
  return {avg, std::move(per_node)};
}

MetricsReport compute_metrics(const Graph& graph, const ClusterLabels& labels,
                              const GroupAssignment& groups, const ClusterLabels* truth) {
  MetricsReport report;
  report.modularity = modularity(graph, labels);
  if (groups.group_count() >= 2) {
    auto [b, per_cluster] = average_balance(labels, groups);
    report.avg_balance = b;
    report.per_cluster_balance = std::move(per_cluster);
  } else {
    report.warnings.push_back("single sensitive group: balance is undefined");
  }
  if (truth) {
    report.accuracy = accuracy(labels, *truth);
  }
  report.rho_avg = rho_fairness(graph, labels).first;
  report.cluster_sizes = labels.cluster_sizes();
  report.group_by_cluster = contingency(labels, groups);
  return report;
}

std::string metrics_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["modularity"] = report.modularity;
  j["avg_balance"] =
      report.avg_balance ? nlohmann::ordered_json(*report.avg_balance) : nullptr;
  j["per_cluster_balance"] = report.per_cluster_balance;
  j["accuracy"] = report.accuracy ? nlohmann::ordered_json(*report.accuracy) : nullptr;
  j["rho_avg"] = report.rho_avg;
  j["cluster_sizes"] = report.cluster_sizes;
  j["group_by_cluster"] = report.group_by_cluster;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

std::string metrics_csv_header() { return "Q,B,accuracy,rho"; }

std::string metrics_csv_row(const MetricsReport& report) {
  std::ostringstream os;
  os << format_double(report.modularity) << ',';
  if (report.avg_balance) os << format_double(*report.avg_balance);
  os << ',';
  if (report.accuracy) os << format_double(*report.accuracy);
  os << ',';
  os << format_double(report.rho_avg);
  return os.str();
}

}  // namespace fairclust
