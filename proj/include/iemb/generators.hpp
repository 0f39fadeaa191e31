#pragma once

#include <cstdint>
#include <vector>

#include "iemb/graph_store.hpp"

namespace iemb {

/// G(n, p) without self-loops, sampled by geometric skipping in O(n + m).
Graph erdos_renyi(std::uint64_t n, double p, std::uint64_t seed);

struct BlockModelGraph {
  Graph graph;
  std::vector<std::uint32_t> block;  ///< block id per node
};

/// Stochastic block model with contiguous blocks of the given sizes.
BlockModelGraph stochastic_block_model(const std::vector<std::uint64_t>& block_sizes, double p_in,
                                       double p_out, std::uint64_t seed);

}  // namespace iemb
