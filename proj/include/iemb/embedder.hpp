#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "iemb/feature_hashing.hpp"
#include "iemb/graph_store.hpp"
#include "iemb/ppr.hpp"

namespace iemb {

inline constexpr std::uint64_t kDefaultDim = 512;

struct EmbedConfig {
  double alpha = kDefaultAlpha;
  double epsilon = kDefaultEpsilon;
  HashSeeds seeds{kDefaultSeed, kDefaultDim};

  std::uint64_t dim() const { return seeds.dim(); }
  void validate() const;
};

struct EmbeddingVector {
  NodeId node = 0;
  std::vector<double> values;
};

/// Row-major n x d embedding matrix with the configuration that produced it.
struct EmbeddingMatrix {
  std::uint64_t rows = 0;
  std::uint64_t dim = 0;
  double alpha = kDefaultAlpha;
  double epsilon = kDefaultEpsilon;
  std::uint64_t master_seed = kDefaultSeed;
  std::vector<double> values;

  std::span<const double> row(std::uint64_t v) const {
    return std::span<const double>(values).subspan(v * dim, dim);
  }
};

/// Raised by graph_embedding when a row fails; carries the node id.
class NodeEmbeddingError : public std::runtime_error {
 public:
  NodeEmbeddingError(NodeId node, const std::string& what);
  NodeId node() const { return node_; }

 private:
  NodeId node_;
};

/// max(ln(r * n), 0). Masses at or below 1/n map to 0.
double transform_mass(double mass, std::uint64_t node_count);

/// Sparse pre-projection row: clamped log-mass per PPR entry, zeros dropped,
/// ascending by node id.
std::vector<SparseEntry> transformed_row(const SparsePprVector& ppr, std::uint64_t node_count);

/// Embedding of a single node from its local PPR neighborhood only.
EmbeddingVector instant_embedding(const GraphHandle& graph, NodeId v, const EmbedConfig& cfg,
                                  PushStats* stats = nullptr);

/// Embeds every node. Rows are independent, so the output does not depend
/// on the worker count, and row v equals instant_embedding(v) bit for bit.
EmbeddingMatrix graph_embedding(const GraphHandle& graph, const EmbedConfig& cfg,
                                unsigned workers = 1);

/// Embeds the listed nodes in the given order.
EmbeddingMatrix embed_nodes(const GraphHandle& graph, std::span<const NodeId> nodes,
                            const EmbedConfig& cfg, unsigned workers = 1);

}  // namespace iemb
