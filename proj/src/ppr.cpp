#include "iemb/ppr.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "iemb/counting_allocator.hpp"
#include "iemb/errors.hpp"

namespace iemb {

double SparsePprVector::total_mass() const {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.mass;
  return sum;
}

std::optional<double> SparsePprVector::mass(NodeId node) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), node,
                             [](const PprEntry& e, NodeId id) { return e.node < id; });
  if (it == entries.end() || it->node != node) return std::nullopt;
  return it->mass;
}

void validate_ppr_params(double alpha, double epsilon) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw DomainError("epsilon must lie in (0, 1], got " + std::to_string(epsilon));
  }
}

namespace {

struct Slot {
  double residual = 0.0;
  double estimate = 0.0;
  std::uint64_t degree = 0;
  bool queued = false;
  bool loaded = false;
};

using SlotMap = std::unordered_map<NodeId, Slot, std::hash<NodeId>, std::equal_to<>,
                                   CountingAllocator<std::pair<const NodeId, Slot>>>;
using WorkQueue = std::deque<NodeId, CountingAllocator<NodeId>>;

void check_conservation(const SlotMap& slots) {
  double sum = 0.0;
  for (const auto& [node, slot] : slots) sum += slot.residual + slot.estimate;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::logic_error("push lost mass: p + r sums to " + std::to_string(sum));
  }
}

}  // namespace

PprResult approximate_ppr(const GraphHandle& graph, NodeId source, double alpha, double epsilon,
                          const PushOptions& options) {
  validate_ppr_params(alpha, epsilon);
  if (source >= graph.node_count()) {
    throw OutOfRangeError("source node " + std::to_string(source) + " out of range");
  }

  PushStats stats;
  AllocationTally tally;
  {
    SlotMap slots(16, std::hash<NodeId>{}, std::equal_to<>{},
                  CountingAllocator<std::pair<const NodeId, Slot>>(&tally));
    WorkQueue queue{CountingAllocator<NodeId>(&tally)};

    Slot& start = slots[source];
    start.residual = 1.0;
    start.degree = graph.degree(source);
    stats.degree_lookups = 1;
    start.queued = true;
    queue.push_back(source);

    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      Slot& slot = slots.find(u)->second;
      slot.queued = false;

      const double mass = slot.residual;
      const std::uint64_t deg = slot.degree;
      ++stats.push_count;
      slot.residual = 0.0;

      if (deg == 0) {
        slot.estimate += mass;
        if (options.check_conservation) check_conservation(slots);
        continue;
      }

      slot.estimate += alpha * mass;
      const double share = (1.0 - alpha) * mass / static_cast<double>(deg);
      const auto nbrs = graph.neighbors(u);
      if (!slot.loaded) {
        slot.loaded = true;
        ++stats.nodes_touched;
        stats.slice_bytes += 16 + 8 * deg;
      }

      for (NodeId w : nbrs) {
        auto [it, inserted] = slots.try_emplace(w);
        Slot& target = it->second;
        if (inserted) {
          target.degree = graph.degree(w);
          ++stats.degree_lookups;
        }
        target.residual += share;
        if (!target.queued &&
            target.residual >= epsilon * static_cast<double>(target.degree)) {
          target.queued = true;
          queue.push_back(w);
        }
      }
      if (options.check_conservation) check_conservation(slots);
    }

    SparsePprVector ppr;
    ppr.source = source;
    ppr.alpha = alpha;
    ppr.epsilon = epsilon;
    for (const auto& [node, slot] : slots) {
      if (slot.estimate > 0.0) {
        ppr.entries.push_back({node, slot.estimate});
        stats.support_volume += slot.degree;
      }
    }
    std::sort(ppr.entries.begin(), ppr.entries.end(),
              [](const PprEntry& a, const PprEntry& b) { return a.node < b.node; });
    stats.state_peak_bytes = tally.peak;
    return {std::move(ppr), stats};
  }
}

std::vector<double> exact_ppr(const GraphHandle& graph, NodeId source, double alpha, double tol) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const std::uint64_t n = graph.node_count();
  if (source >= n) throw OutOfRangeError("source node " + std::to_string(source) + " out of range");

  std::vector<double> pi(n, 0.0);
  std::vector<double> next(n, 0.0);
  pi[source] = 1.0;
  constexpr int kMaxIterations = 1'000'000;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    next[source] = alpha;
    for (NodeId u = 0; u < n; ++u) {
      if (pi[u] == 0.0) continue;
      const std::uint64_t deg = graph.degree(u);
      if (deg == 0) {
        next[u] += (1.0 - alpha) * pi[u];
        continue;
      }
      const double share = (1.0 - alpha) * pi[u] / static_cast<double>(deg);
      for (NodeId w : graph.neighbors(u)) next[w] += share;
    }
    double change = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) change += std::abs(next[i] - pi[i]);
    pi.swap(next);
    if (change < tol) return pi;
  }
  throw std::runtime_error("exact_ppr did not converge in 1e6 iterations");
}

}  // namespace iemb
