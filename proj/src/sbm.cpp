#include "fairclust/sbm.hpp"

#include "fairclust/errors.hpp"
#include "fairclust/rng.hpp"

namespace fairclust {

SbmSample generate(const SbmSpec& spec) {
  if (spec.n == 0) {
    throw ValidationError("n must be positive");
  }
  if (spec.k < 2) {
    throw ValidationError("k must be >= 2");
  }
  if (spec.g < 1) {
    throw ValidationError("g must be >= 1");
  }
  if (spec.n % static_cast<std::size_t>(spec.k) != 0) {
    throw ValidationError("n must be divisible by k");
  }
  if (spec.n % static_cast<std::size_t>(spec.g) != 0) {
    throw ValidationError("n must be divisible by g");
  }
  if (!(spec.p_out >= 0.0 && spec.p_out < spec.p_in && spec.p_in <= 1.0)) {
    throw ValidationError("edge probabilities must satisfy 0 <= p_out < p_in <= 1");
  }

  const std::size_t n = spec.n;
  const std::size_t block_size = n / static_cast<std::size_t>(spec.k);

  std::vector<std::uint32_t> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = static_cast<std::uint32_t>(i / block_size);
  }

  // Row-major pair scan; the draw order is part of the determinism contract.
  Rng edge_rng(derive_seed(spec.seed, 1));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = (truth[i] == truth[j]) ? spec.p_in : spec.p_out;
      if (edge_rng.uniform() < p) {
        edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
      }
    }
  }

  Rng group_rng(derive_seed(spec.seed, 2));
  const std::size_t group_size = n / static_cast<std::size_t>(spec.g);
  std::vector<std::uint32_t> group_labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    group_labels[i] = static_cast<std::uint32_t>(i / group_size);
  }
  group_rng.shuffle(group_labels);

  return SbmSample{Graph(n, std::move(edges)),
                   ClusterLabels(std::move(truth), static_cast<std::uint32_t>(spec.k)),
                   GroupAssignment(group_labels)};
}

}  // namespace fairclust
