#include "fairclust/graph.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "fairclust/errors.hpp"

namespace fairclust {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n) {
  if (n == 0) {
    throw ValidationError("graph has no nodes");
  }
  for (auto& [u, v] : edges) {
    if (u == v) {
      throw ValidationError("self-loop (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    if (u >= n || v >= n) {
      throw ValidationError("edge endpoint out of range: (" + std::to_string(u) + "," +
                            std::to_string(v) + ") with n=" + std::to_string(n));
    }
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  degrees_.assign(n_, 0);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edges_.size() * 2);
  for (const auto& [u, v] : edges_) {
    triplets.emplace_back(static_cast<int>(u), static_cast<int>(v), 1.0);
    triplets.emplace_back(static_cast<int>(v), static_cast<int>(u), 1.0);
    ++degrees_[u];
    ++degrees_[v];
  }
  adjacency_.resize(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  adjacency_.setFromTriplets(triplets.begin(), triplets.end());
  adjacency_.makeCompressed();
}

GroupAssignment::GroupAssignment(const std::vector<std::uint32_t>& labels) {
  if (labels.empty()) {
    throw ValidationError("group assignment is empty");
  }
  std::unordered_map<std::uint32_t, std::uint32_t> dense;
  labels_.reserve(labels.size());
  for (std::uint32_t raw : labels) {
    auto [it, inserted] = dense.try_emplace(raw, static_cast<std::uint32_t>(dense.size()));
    labels_.push_back(it->second);
  }
  m_ = static_cast<std::uint32_t>(dense.size());
  group_sizes_.assign(m_, 0);
  for (std::uint32_t g : labels_) ++group_sizes_[g];
}

ClusterLabels::ClusterLabels(std::vector<std::uint32_t> labels, std::uint32_t k)
    : labels_(std::move(labels)), k_(k) {
  if (k_ < 2) {
    throw ValidationError("cluster count k must be >= 2, got " + std::to_string(k_));
  }
  if (labels_.empty()) {
    throw ValidationError("cluster labels are empty");
  }
  for (std::uint32_t c : labels_) {
    if (c >= k_) {
      throw ValidationError("cluster label " + std::to_string(c) + " out of range [0," +
                            std::to_string(k_) + ")");
    }
  }
}

std::vector<std::size_t> ClusterLabels::cluster_sizes() const {
  std::vector<std::size_t> sizes(k_, 0);
  for (std::uint32_t c : labels_) ++sizes[c];
  return sizes;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_comment_or_blank(const std::string& line) {
  const std::string t = trim(line);
  return t.empty() || t[0] == '#';
}

std::uint32_t parse_node_id(const std::string& tok, std::size_t line_no) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
        return std::isdigit(c);
      })) {
    throw ValidationError("line " + std::to_string(line_no) + ": expected nonnegative integer, got '" +
                          tok + "'");
  }
  unsigned long long v = 0;
  try {
    v = std::stoull(tok);
  } catch (const std::exception&) {
    throw ValidationError("line " + std::to_string(line_no) + ": node id out of range: '" + tok + "'");
  }
  if (v > 0xffffffffULL) {
    throw ValidationError("line " + std::to_string(line_no) + ": node id out of range: '" + tok + "'");
  }
  return static_cast<std::uint32_t>(v);
}

// Union-find over node ids.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

constexpr std::size_t kMaxReportedPositions = 16;

}  // namespace

Graph load_edge_list(std::istream& in, std::optional<std::size_t> n_hint) {
  std::vector<Edge> edges;
  std::uint32_t max_id = 0;
  bool saw_any = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    std::string tok_u, tok_v, extra;
    ls >> tok_u >> tok_v;
    if (tok_v.empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected two node ids");
    }
    if (ls >> extra) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": unexpected third column '" + extra +
                            "' (weighted edge lists are not accepted)");
    }
    const std::uint32_t u = parse_node_id(tok_u, line_no);
    const std::uint32_t v = parse_node_id(tok_v, line_no);
    if (u == v) {
      throw ValidationError("line " + std::to_string(line_no) + ": self-loop on node " +
                            std::to_string(u));
    }
    edges.emplace_back(u, v);
    max_id = std::max({max_id, u, v});
    saw_any = true;
  }
  std::size_t n = saw_any ? static_cast<std::size_t>(max_id) + 1 : 0;
  if (n_hint && *n_hint > n) n = *n_hint;
  if (n == 0) {
    throw ValidationError("empty graph: no edges and no node-count hint");
  }
  return Graph(n, std::move(edges));
}

void save_edge_list(const Graph& g, std::ostream& out) {
  for (const auto& [u, v] : g.edges()) {
    out << u << ' ' << v << '\n';
  }
}

GroupAssignment load_groups(std::istream& in, std::size_t n) {
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    std::string tok, extra;
    ls >> tok;
    if (ls >> extra) {
      throw ValidationError("group file line " + std::to_string(line_no) +
                            ": expected a single token, got '" + trim(line) + "'");
    }
    tokens.push_back(tok);
  }
  if (tokens.size() != n) {
    throw ValidationError("group file: expected " + std::to_string(n) + " labels, found " +
                          std::to_string(tokens.size()));
  }
  // Densify in first-appearance order.
  std::unordered_map<std::string, std::uint32_t> dense;
  std::vector<std::uint32_t> labels;
  labels.reserve(n);
  for (const std::string& tok : tokens) {
    auto [it, inserted] = dense.try_emplace(tok, static_cast<std::uint32_t>(dense.size()));
    labels.push_back(it->second);
  }
  return GroupAssignment(labels);
}

Diagnostics validate(const SparseMatrixD& a) {
  Diagnostics d;
  const auto n = static_cast<std::size_t>(a.rows());
  if (a.rows() != a.cols()) {
    d.symmetric = false;
    return d;
  }
  std::vector<bool> touched(n, false);
  DisjointSets components(n);
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrixD::InnerIterator it(a, i); it; ++it) {
      if (it.value() == 0.0) continue;
      const auto r = static_cast<std::size_t>(it.row());
      const auto c = static_cast<std::size_t>(it.col());
      if (r == c) {
        d.self_loops.push_back(r);
      } else {
        touched[r] = true;
        touched[c] = true;
        components.unite(r, c);
      }
      if (it.value() != 1.0 && d.non_binary_positions.size() < kMaxReportedPositions) {
        d.non_binary_positions.emplace_back(r, c);
      }
      if (a.coeff(it.col(), it.row()) != it.value()) {
        d.symmetric = false;
        if (d.asymmetric_positions.size() < kMaxReportedPositions) {
          d.asymmetric_positions.emplace_back(r, c);
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!touched[i]) d.isolated_nodes.push_back(i);
  }
  std::vector<bool> seen_root(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = components.find(i);
    if (!seen_root[root]) {
      seen_root[root] = true;
      ++d.component_count;
    }
  }
  return d;
}

Diagnostics validate(const Graph& g) { return validate(g.adjacency()); }

std::string Diagnostics::summary() const {
  std::ostringstream os;
  os << "symmetric: " << (symmetric ? "yes" : "no") << '\n';
  if (!asymmetric_positions.empty()) {
    os << "asymmetric positions (first " << asymmetric_positions.size() << "):";
    for (const auto& [i, j] : asymmetric_positions) os << " (" << i << "," << j << ")";
    os << '\n';
  }
  os << "self-loops: " << self_loops.size() << '\n';
  if (!non_binary_positions.empty()) {
    os << "non-binary entries (first " << non_binary_positions.size() << "):";
    for (const auto& [i, j] : non_binary_positions) os << " (" << i << "," << j << ")";
    os << '\n';
  }
  os << "isolated nodes: " << isolated_nodes.size();
  if (!isolated_nodes.empty() && isolated_nodes.size() <= kMaxReportedPositions) {
    os << " [";
    for (std::size_t i = 0; i < isolated_nodes.size(); ++i) {
      os << (i ? " " : "") << isolated_nodes[i];
    }
    os << "]";
  }
  os << '\n';
  os << "connected components: " << component_count << '\n';
  return os.str();
}

}  // namespace fairclust
