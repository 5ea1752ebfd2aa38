// io.hpp -- CSV/file helpers shared by the CLI and the sweep harness
#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>

#include "fairclust/graph.hpp"

namespace fairclust {

// Shortest round-trip decimal form (std::to_chars). NaN prints as "nan";
// CSV writers map NaN to an empty field instead.
std::string format_double(double v);

// Membership CSV: header "node,cluster", one row per node.
void write_membership_csv(std::ostream& out, const ClusterLabels& labels);

// Every node in [0, n) must appear exactly once; rows may come in any
// order. k defaults to max label + 1 (at least 2) unless overridden.
ClusterLabels read_membership_csv(std::istream& in, std::size_t n,
                                  std::optional<std::uint32_t> k_override = std::nullopt);

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace fairclust
