#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "iemb/graph_store.hpp"
#include "iemb/random.hpp"

namespace iemb::testing {

inline std::filesystem::path temp_path(const std::string& name) {
  std::filesystem::path dir(IEMB_TEST_TMP);
  std::filesystem::create_directories(dir);
  return dir / name;
}

inline std::filesystem::path write_text(const std::string& name, const std::string& text) {
  auto path = temp_path(name);
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

/// Random connected graph: a random recursive tree plus `extra` random edges
/// (self-loops allowed when `loops` is set).
inline Graph random_connected_graph(std::uint64_t n, std::uint64_t extra, std::uint64_t seed,
                                    bool loops = false) {
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(rng.below(v), v);
  for (std::uint64_t i = 0; i < extra && n > 1; ++i) {
    NodeId u = rng.below(n);
    NodeId v = rng.below(n);
    if (u == v && !loops) continue;
    edges.emplace_back(u, v);
  }
  return Graph::from_edges(n, edges);
}

/// Arbitrary graph, possibly disconnected, with isolated nodes.
inline Graph random_graph(std::uint64_t n, std::uint64_t edges_count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::uint64_t i = 0; i < edges_count && n > 0; ++i) {
    edges.emplace_back(rng.below(n), rng.below(n));
  }
  return Graph::from_edges(n, edges);
}

inline Graph path_graph(std::uint64_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
  return Graph::from_edges(n, edges);
}

inline Graph cycle_graph(std::uint64_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return Graph::from_edges(n, edges);
}

inline Graph complete_graph(std::uint64_t n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

}  // namespace iemb::testing
