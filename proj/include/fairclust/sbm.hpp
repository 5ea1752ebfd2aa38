// sbm.hpp -- stochastic-block-model benchmark generator with planted
// equal-size clusters and randomly distributed sensitive groups
#pragma once

#include <cstdint>

#include "fairclust/graph.hpp"

namespace fairclust {

struct SbmSpec {
  std::size_t n = 0;
  int k = 2;  // planted clusters; must divide n
  int g = 2;  // sensitive groups; must divide n
  double p_in = 0.25;
  double p_out = 0.02;
  std::uint64_t seed = 0;
};

struct SbmSample {
  Graph graph;
  ClusterLabels truth;       // block ids, contiguous ranges of n/k nodes
  GroupAssignment groups;    // n/g of each group, shuffled independently of blocks
};

// Blocks are contiguous id ranges; each unordered pair draws an edge with
// p_in (same block) or p_out (otherwise). Edge and group randomness come
// from independent streams of the seed, so the group layout does not
// depend on the realized edges.
SbmSample generate(const SbmSpec& spec);

}  // namespace fairclust
