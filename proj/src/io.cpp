#include "fairclust/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fairclust/errors.hpp"

namespace fairclust {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;  // 64 bytes always suffice for a double
  return std::string(buf, ptr);
}

void write_membership_csv(std::ostream& out, const ClusterLabels& labels) {
  out << "node,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << i << ',' << labels.label(i) << '\n';
  }
}

ClusterLabels read_membership_csv(std::istream& in, std::size_t n,
                                  std::optional<std::uint32_t> k_override) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("node,cluster", 0) != 0) {
    throw ValidationError("membership CSV: missing 'node,cluster' header");
  }
  std::vector<std::uint32_t> labels(n, 0);
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string node_tok, cluster_tok;
    if (!std::getline(ls, node_tok, ',') || !std::getline(ls, cluster_tok)) {
      throw ValidationError("membership CSV line " + std::to_string(line_no) +
                            ": expected 'node,cluster'");
    }
    unsigned long node = 0, cluster = 0;
    try {
      node = std::stoul(node_tok);
      cluster = std::stoul(cluster_tok);
    } catch (const std::exception&) {
      throw ValidationError("membership CSV line " + std::to_string(line_no) +
                            ": non-integer field");
    }
    if (node >= n) {
      throw ValidationError("membership CSV line " + std::to_string(line_no) + ": node " +
                            std::to_string(node) + " out of range for n=" + std::to_string(n));
    }
    if (seen[node]) {
      throw ValidationError("membership CSV: duplicate row for node " + std::to_string(node));
    }
    seen[node] = true;
    labels[node] = static_cast<std::uint32_t>(cluster);
    ++count;
  }
  if (count != n) {
    throw ValidationError("membership CSV: expected " + std::to_string(n) + " rows, found " +
                          std::to_string(count));
  }
  std::uint32_t k = 2;
  for (std::uint32_t c : labels) k = std::max(k, c + 1);
  if (k_override) {
    if (*k_override < k) {
      throw ValidationError("membership CSV: label " + std::to_string(k - 1) +
                            " out of range for k=" + std::to_string(*k_override));
    }
    k = *k_override;
  }
  return ClusterLabels(std::move(labels), k);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw IoError("write failed for '" + path + "'");
  }
}

}  // namespace fairclust
