#pragma once

// Undirected, unweighted graphs in compressed sparse row form.
//
// On-disk layout (little-endian):
//   "IECS" | u8 version=1 | 3 zero bytes | u64 n | u64 m2 |
//   (n+1) x u64 offsets | m2 x u64 adjacency
// The 24-byte header keeps both arrays 8-byte aligned, so a mapped file can
// be read in place.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iemb {

using NodeId = std::uint64_t;

inline constexpr std::array<char, 4> kCsrMagic = {'I', 'E', 'C', 'S'};
inline constexpr std::uint8_t kCsrVersion = 1;
inline constexpr std::size_t kCsrHeaderBytes = 24;

/// Immutable CSR adjacency. Neighbor slices are sorted ascending and free of
/// duplicates; every edge is stored in both directions, a self-loop once.
class Graph {
 public:
  Graph() : offsets_{0} {}

  /// Takes ownership of prebuilt arrays and validates every invariant.
  Graph(std::vector<std::uint64_t> offsets, std::vector<NodeId> adjacency);

  /// Builds from an edge list; each pair contributes both directions.
  static Graph from_edges(std::uint64_t node_count,
                          std::span<const std::pair<NodeId, NodeId>> edges);

  std::uint64_t node_count() const { return offsets_.size() - 1; }
  std::uint64_t endpoint_count() const { return adjacency_.size(); }

  std::span<const NodeId> neighbors(NodeId v) const;
  std::uint64_t degree(NodeId v) const;

  std::span<const std::uint64_t> offsets() const { return offsets_; }
  std::span<const NodeId> adjacency() const { return adjacency_; }

  /// Undirected edges u <= v, each listed once, in ascending order.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  bool has_edge(NodeId u, NodeId v) const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> adjacency_;
};

/// Reads whitespace-separated integer pairs, one per line. Lines starting
/// with '#' or '%' are comments. Ids are used literally: n = max id + 1.
/// The result is undirected either way; `directed_input` only documents that
/// each edge may appear in one direction.
Graph load_edge_list(const std::filesystem::path& path, bool directed_input = false);
Graph parse_edge_list(std::string_view text, bool directed_input = false);

void write_binary(const Graph& g, const std::filesystem::path& path);

/// Counters for reads served by a GraphHandle. Safe for concurrent updates.
struct ReadStats {
  std::uint64_t nodes_touched = 0;  ///< distinct nodes whose slice was read
  std::uint64_t slice_reads = 0;    ///< neighbors() calls
  std::uint64_t degree_reads = 0;   ///< degree() calls
  std::uint64_t bytes_read = 0;     ///< offsets + adjacency bytes accessed
};

/// Read-only access to a graph, either held in memory or mapped from a
/// binary CSR file. Adjacency of node v is served from offsets[v],
/// offsets[v+1] and that node's slice only.
class GraphHandle {
 public:
  static GraphHandle in_memory(Graph g);
  static GraphHandle in_memory(std::shared_ptr<const Graph> g);

  GraphHandle(GraphHandle&&) noexcept;
  GraphHandle& operator=(GraphHandle&&) noexcept;
  GraphHandle(const GraphHandle&) = delete;
  GraphHandle& operator=(const GraphHandle&) = delete;
  ~GraphHandle();

  std::uint64_t node_count() const { return node_count_; }
  std::uint64_t endpoint_count() const { return endpoint_count_; }
  bool file_backed() const;

  std::span<const NodeId> neighbors(NodeId v) const;
  std::uint64_t degree(NodeId v) const;

  ReadStats stats() const;
  void reset_stats() const;

  /// Copies the whole graph into memory. Used by oracles and the harness.
  Graph materialize() const;

 private:
  struct Backing;
  struct Counters;

  GraphHandle(std::unique_ptr<Backing> backing);
  void check_node(NodeId v) const;

  std::unique_ptr<Backing> backing_;
  std::unique_ptr<Counters> counters_;
  const std::uint64_t* offsets_ = nullptr;
  const NodeId* adjacency_ = nullptr;
  std::uint64_t node_count_ = 0;
  std::uint64_t endpoint_count_ = 0;

  friend GraphHandle open_binary(const std::filesystem::path& path);
};

/// Maps a binary CSR file. Header and array sizes are validated up front;
/// adjacency pages are only faulted in when a node is queried.
GraphHandle open_binary(const std::filesystem::path& path);

}  // namespace iemb
