#include "iemb/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "iemb/errors.hpp"

namespace iemb {

void EmbedConfig::validate() const { validate_ppr_params(alpha, epsilon); }

NodeEmbeddingError::NodeEmbeddingError(NodeId node, const std::string& what)
    : std::runtime_error("embedding node " + std::to_string(node) + " failed: " + what),
      node_(node) {}

double transform_mass(double mass, std::uint64_t node_count) {
  if (!(mass > 0.0)) return 0.0;
  return std::max(std::log(mass * static_cast<double>(node_count)), 0.0);
}

std::vector<SparseEntry> transformed_row(const SparsePprVector& ppr, std::uint64_t node_count) {
  std::vector<SparseEntry> row;
  row.reserve(ppr.entries.size());
  for (const auto& [node, mass] : ppr.entries) {
    const double value = transform_mass(mass, node_count);
    if (value > 0.0) row.push_back({node, value});
  }
  return row;
}

namespace {

void embed_into(const GraphHandle& graph, NodeId v, const EmbedConfig& cfg, std::span<double> out,
                PushStats* stats) {
  auto result = approximate_ppr(graph, v, cfg.alpha, cfg.epsilon);
  if (stats != nullptr) *stats = result.stats;
  std::fill(out.begin(), out.end(), 0.0);
  project_sorted_into(transformed_row(result.ppr, graph.node_count()), cfg.seeds, out);
}

}  // namespace

EmbeddingVector instant_embedding(const GraphHandle& graph, NodeId v, const EmbedConfig& cfg,
                                  PushStats* stats) {
  cfg.validate();
  EmbeddingVector w{v, std::vector<double>(cfg.dim(), 0.0)};
  embed_into(graph, v, cfg, w.values, stats);
  return w;
}

EmbeddingMatrix embed_nodes(const GraphHandle& graph, std::span<const NodeId> nodes,
                            const EmbedConfig& cfg, unsigned workers) {
  cfg.validate();
  if (workers == 0) throw DomainError("worker count must be >= 1");
  for (NodeId v : nodes) {
    if (v >= graph.node_count()) throw OutOfRangeError("node " + std::to_string(v) + " out of range");
  }

  EmbeddingMatrix m;
  m.rows = nodes.size();
  m.dim = cfg.dim();
  m.alpha = cfg.alpha;
  m.epsilon = cfg.epsilon;
  m.master_seed = cfg.seeds.master_seed();
  m.values.assign(m.rows * m.dim, 0.0);

  const std::uint64_t count = nodes.size();
  const unsigned used = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
  std::vector<std::exception_ptr> errors(used);
  std::vector<NodeId> failed(used, 0);

  auto run_range = [&](unsigned worker) {
    const std::uint64_t begin = count * worker / used;
    const std::uint64_t end = count * (worker + 1) / used;
    for (std::uint64_t i = begin; i < end; ++i) {
      try {
        embed_into(graph, nodes[i], cfg,
                   std::span<double>(m.values).subspan(i * m.dim, m.dim), nullptr);
      } catch (...) {
        errors[worker] = std::current_exception();
        failed[worker] = nodes[i];
        return;
      }
    }
  };

  if (used == 1) {
    run_range(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(used);
    for (unsigned w = 0; w < used; ++w) threads.emplace_back(run_range, w);
  }

  for (unsigned w = 0; w < used; ++w) {
    if (!errors[w]) continue;
    try {
      std::rethrow_exception(errors[w]);
    } catch (const std::exception& e) {
      throw NodeEmbeddingError(failed[w], e.what());
    }
  }
  return m;
}

EmbeddingMatrix graph_embedding(const GraphHandle& graph, const EmbedConfig& cfg,
                                unsigned workers) {
  std::vector<NodeId> all(graph.node_count());
  std::iota(all.begin(), all.end(), NodeId{0});
  return embed_nodes(graph, all, cfg, workers);
}

}  // namespace iemb
