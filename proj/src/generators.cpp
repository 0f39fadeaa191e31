#include "iemb/generators.hpp"

#include <cmath>
#include <limits>

#include "iemb/errors.hpp"
#include "iemb/random.hpp"

namespace iemb {

namespace {

using EdgeList = std::vector<std::pair<NodeId, NodeId>>;

// Geometric gap to the next success of a Bernoulli(p) sequence.
std::uint64_t next_gap(Rng& rng, double log_q) {
  const double u = rng.uniform();
  const double gap = std::floor(std::log1p(-u) / log_q);
  if (gap >= 9.0e18) return std::numeric_limits<std::uint64_t>::max() / 2;
  return static_cast<std::uint64_t>(gap);
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("edge probability must lie in [0, 1]");
}

// Pairs (offset + i, offset + j), 0 <= j < i < size.
void sample_triangle(Rng& rng, std::uint64_t offset, std::uint64_t size, double p, EdgeList& out) {
  if (p <= 0.0 || size < 2) return;
  if (p >= 1.0) {
    for (std::uint64_t i = 1; i < size; ++i)
      for (std::uint64_t j = 0; j < i; ++j) out.emplace_back(offset + j, offset + i);
    return;
  }
  const double log_q = std::log1p(-p);
  std::uint64_t i = 1;
  std::uint64_t j = 0;
  bool first = true;
  while (i < size) {
    std::uint64_t step = next_gap(rng, log_q) + (first ? 0 : 1);
    first = false;
    j += step;
    while (i < size && j >= i) {
      j -= i;
      ++i;
    }
    if (i < size) out.emplace_back(offset + j, offset + i);
  }
}

// Pairs (row_offset + i, col_offset + j) over a rows x cols grid.
void sample_rectangle(Rng& rng, std::uint64_t row_offset, std::uint64_t rows,
                      std::uint64_t col_offset, std::uint64_t cols, double p, EdgeList& out) {
  const std::uint64_t total = rows * cols;
  if (p <= 0.0 || total == 0) return;
  if (p >= 1.0) {
    for (std::uint64_t k = 0; k < total; ++k)
      out.emplace_back(row_offset + k / cols, col_offset + k % cols);
    return;
  }
  const double log_q = std::log1p(-p);
  std::uint64_t k = next_gap(rng, log_q);
  while (k < total) {
    out.emplace_back(row_offset + k / cols, col_offset + k % cols);
    k += 1 + next_gap(rng, log_q);
  }
}

}  // namespace

Graph erdos_renyi(std::uint64_t n, double p, std::uint64_t seed) {
  check_probability(p);
  Rng rng(seed);
  EdgeList edges;
  edges.reserve(static_cast<std::size_t>(p * static_cast<double>(n) * static_cast<double>(n) / 2.0 * 1.05) + 16);
  sample_triangle(rng, 0, n, p, edges);
  return Graph::from_edges(n, edges);
}

BlockModelGraph stochastic_block_model(const std::vector<std::uint64_t>& block_sizes, double p_in,
                                       double p_out, std::uint64_t seed) {
  check_probability(p_in);
  check_probability(p_out);
  Rng rng(seed);
  std::vector<std::uint64_t> starts;
  std::uint64_t n = 0;
  for (auto size : block_sizes) {
    starts.push_back(n);
    n += size;
  }

  EdgeList edges;
  BlockModelGraph out;
  out.block.reserve(n);
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    out.block.insert(out.block.end(), block_sizes[b], static_cast<std::uint32_t>(b));
  }
  for (std::size_t a = 0; a < block_sizes.size(); ++a) {
    sample_triangle(rng, starts[a], block_sizes[a], p_in, edges);
    for (std::size_t b = a + 1; b < block_sizes.size(); ++b) {
      sample_rectangle(rng, starts[a], block_sizes[a], starts[b], block_sizes[b], p_out, edges);
    }
  }
  out.graph = Graph::from_edges(n, edges);
  return out;
}

}  // namespace iemb
