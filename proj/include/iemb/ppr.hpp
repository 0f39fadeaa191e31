#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "iemb/graph_store.hpp"

namespace iemb {

inline constexpr double kDefaultAlpha = 0.15;
inline constexpr double kDefaultEpsilon = 1e-5;

struct PprEntry {
  NodeId node;
  double mass;

  friend bool operator==(const PprEntry&, const PprEntry&) = default;
};

/// Sparse ε-approximate personalized PageRank estimate for one source.
/// Entries are sorted by node id and carry strictly positive mass.
struct SparsePprVector {
  NodeId source = 0;
  double alpha = kDefaultAlpha;
  double epsilon = kDefaultEpsilon;
  std::vector<PprEntry> entries;

  double total_mass() const;
  std::optional<double> mass(NodeId node) const;

  friend bool operator==(const SparsePprVector&, const SparsePprVector&) = default;
};

struct PushStats {
  std::uint64_t push_count = 0;
  std::uint64_t nodes_touched = 0;   ///< distinct nodes whose adjacency slice was read
  std::uint64_t support_volume = 0;  ///< sum of degrees over the support
  std::uint64_t degree_lookups = 0;  ///< distinct nodes whose degree was read
  std::uint64_t state_peak_bytes = 0;  ///< peak heap bytes of residual/estimate/queue
  std::uint64_t slice_bytes = 0;       ///< offsets + adjacency bytes loaded
};

struct PprResult {
  SparsePprVector ppr;
  PushStats stats;
};

struct PushOptions {
  /// Re-checks sum(p) + sum(r) == 1 after every push. O(support) per push.
  bool check_conservation = false;
};

void validate_ppr_params(double alpha, double epsilon);

/// Local push on the standard (non-lazy) walk. Over-threshold nodes,
/// r(u) >= epsilon * deg(u), are processed FIFO and enqueued at most once
/// while pending. A degree-0 node absorbs its residual into the estimate.
PprResult approximate_ppr(const GraphHandle& graph, NodeId source, double alpha, double epsilon,
                          const PushOptions& options = {});

/// Dense power iteration of pi = alpha * e_v + (1 - alpha) * pi D^-1 A,
/// started from e_v, until the L1 change between iterates drops below tol.
/// Degree-0 nodes keep their mass, matching the push convention.
std::vector<double> exact_ppr(const GraphHandle& graph, NodeId source, double alpha, double tol);

}  // namespace iemb
