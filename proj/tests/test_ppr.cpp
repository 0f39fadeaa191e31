#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "iemb/errors.hpp"
#include "iemb/ppr.hpp"
#include "test_support.hpp"

using namespace iemb;
using iemb::testing::complete_graph;
using iemb::testing::cycle_graph;
using iemb::testing::random_connected_graph;
using iemb::testing::random_graph;

namespace {

GraphHandle handle_of(const Graph& g) { return GraphHandle::in_memory(g); }

// 0 <= exact(u) - p(u) < eps * deg(u) for every node, with numerical slack.
void check_eps_approximation(const GraphHandle& h, NodeId source, double alpha, double eps) {
  const auto exact = exact_ppr(h, source, alpha, 1e-12);
  const auto approx = approximate_ppr(h, source, alpha, eps);
  std::vector<double> p(h.node_count(), 0.0);
  for (const auto& e : approx.ppr.entries) p[e.node] = e.mass;
  for (NodeId u = 0; u < h.node_count(); ++u) {
    const double gap = exact[u] - p[u];
    REQUIRE(gap >= -1e-10);
    REQUIRE(gap < eps * static_cast<double>(h.degree(u)) + 1e-10);
  }
}

}  // namespace

TEST_CASE("single node with self-loop") {
  const auto h = handle_of(parse_edge_list("0 0"));
  for (double alpha : {0.1, 0.15, 0.5}) {
    const auto r = approximate_ppr(h, 0, alpha, 1e-3);
    REQUIRE(r.ppr.entries.size() == 1);
    const double p = r.ppr.entries[0].mass;
    CHECK(p < 1.0);
    CHECK(1.0 - p < 1e-3);
    const auto exact = exact_ppr(h, 0, alpha, 1e-12);
    CHECK(exact[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("K2 against the closed form") {
  const auto h = handle_of(parse_edge_list("0 1"));
  const double alpha = 0.15;
  // pi(v) = 1/(2-alpha) solved from the fixed point
  const double pi0 = 1.0 / (2.0 - alpha);
  const double pi1 = (1.0 - alpha) / (2.0 - alpha);
  const auto exact = exact_ppr(h, 0, alpha, 1e-12);
  CHECK(std::abs(exact[0] - pi0) < 1e-11);
  CHECK(std::abs(exact[1] - pi1) < 1e-11);
  CHECK(pi0 == doctest::Approx(0.5405405405405405));

  for (double eps : {1e-2, 1e-4, 1e-6}) {
    const auto r = approximate_ppr(h, 0, alpha, eps);
    const double p0 = r.ppr.mass(0).value_or(0.0);
    const double p1 = r.ppr.mass(1).value_or(0.0);
    CHECK(pi0 - p0 >= 0.0);
    CHECK(pi0 - p0 < eps);
    CHECK(pi1 - p1 >= 0.0);
    CHECK(pi1 - p1 < eps);
  }
}

TEST_CASE("triangle against the closed form") {
  const auto h = handle_of(parse_edge_list("0 1\n1 2\n2 0"));
  const double alpha = 0.15;
  const double pi0 = (1.0 + alpha) / (3.0 - alpha);   // 0.403508...
  const double pi1 = (1.0 - alpha) / (3.0 - alpha);   // 0.298245...
  const auto exact = exact_ppr(h, 0, alpha, 1e-12);
  CHECK(std::abs(exact[0] - pi0) < 1e-11);
  CHECK(std::abs(exact[1] - pi1) < 1e-11);
  CHECK(std::abs(exact[2] - pi1) < 1e-11);
  CHECK(exact[0] == doctest::Approx(0.40351).epsilon(1e-4));
  check_eps_approximation(h, 0, alpha, 1e-3);
}

TEST_CASE("exact_ppr: vertex-transitive symmetry and decay limit") {
  const auto cycle = handle_of(cycle_graph(9));
  auto pi = exact_ppr(cycle, 4, 0.15, 1e-12);
  for (int k = 1; k <= 4; ++k) CHECK(pi[4 - k] == doctest::Approx(pi[4 + k]).epsilon(1e-12));
  const auto k5 = handle_of(complete_graph(5));
  pi = exact_ppr(k5, 2, 0.3, 1e-12);
  for (NodeId u : {0, 1, 3, 4}) CHECK(pi[u] == doctest::Approx(pi[0]).epsilon(1e-12));
  double sum = 0;
  for (double x : pi) sum += x;
  CHECK(std::abs(sum - 1.0) < 1e-10);

  pi = exact_ppr(k5, 0, 0.999, 1e-12);
  CHECK(pi[0] >= 0.999);
}

TEST_CASE("parameter domains and bounds") {
  const auto h = handle_of(parse_edge_list("0 1"));
  CHECK_THROWS_AS(approximate_ppr(h, 0, 0.0, 1e-3), DomainError);
  CHECK_THROWS_AS(approximate_ppr(h, 0, 1.0, 1e-3), DomainError);
  CHECK_THROWS_AS(approximate_ppr(h, 0, 0.15, 0.0), DomainError);
  CHECK_THROWS_AS(approximate_ppr(h, 0, 0.15, 1.5), DomainError);
  CHECK_NOTHROW(approximate_ppr(h, 0, 0.15, 1.0));
  CHECK_THROWS_AS(approximate_ppr(h, 2, 0.15, 1e-3), OutOfRangeError);
  CHECK_THROWS_AS(exact_ppr(h, 0, 0.15, 0.0), DomainError);
  CHECK_THROWS_AS(exact_ppr(h, 5, 0.15, 1e-9), OutOfRangeError);
}

TEST_CASE("isolated source absorbs all mass") {
  const auto h = handle_of(parse_edge_list("0 2"));
  const auto r = approximate_ppr(h, 1, 0.15, 1e-4);
  REQUIRE(r.ppr.entries.size() == 1);
  CHECK(r.ppr.entries[0].node == 1);
  CHECK(r.ppr.entries[0].mass == 1.0);
  CHECK(r.stats.nodes_touched == 0);
  const auto exact = exact_ppr(h, 1, 0.15, 1e-12);
  CHECK(exact[1] == doctest::Approx(1.0));
}

TEST_CASE("property: epsilon approximation on random graphs") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Graph g = random_connected_graph(20 + seed * 8, seed * 15, seed, seed % 3 == 0);
    const auto h = handle_of(g);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      check_eps_approximation(h, seed % g.node_count(), 0.15, eps);
    }
  }
}

TEST_CASE("property: epsilon approximation holds on disconnected graphs with isolated nodes") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = random_graph(60, 50, seed * 31);
    const auto h = handle_of(g);
    for (NodeId v = 0; v < g.node_count(); v += 7) check_eps_approximation(h, v, 0.2, 1e-3);
  }
}

TEST_CASE("property: output invariants, conservation, locality, determinism") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = random_connected_graph(200, 300, seed, true);
    const auto h = handle_of(g);
    const double alpha = 0.15;
    for (double eps : {1e-2, 1e-3}) {
      PushOptions checked;
      checked.check_conservation = true;
      const auto r = approximate_ppr(h, seed, alpha, eps, checked);
      double sum = 0.0;
      for (std::size_t i = 0; i < r.ppr.entries.size(); ++i) {
        REQUIRE(r.ppr.entries[i].mass > 0.0);
        if (i > 0) REQUIRE(r.ppr.entries[i - 1].node < r.ppr.entries[i].node);
        sum += r.ppr.entries[i].mass;
      }
      CHECK(sum <= 1.0 + 1e-12);
      CHECK(static_cast<double>(r.stats.nodes_touched) <= 2.0 / ((1.0 - alpha) * eps));
      CHECK(r.stats.push_count >= r.stats.nodes_touched);
      CHECK(r.stats.state_peak_bytes > 0);

      // support is connected to the source through support nodes
      std::set<NodeId> support;
      for (const auto& e : r.ppr.entries) support.insert(e.node);
      std::set<NodeId> reached{seed};
      std::vector<NodeId> frontier{seed};
      while (!frontier.empty()) {
        const NodeId u = frontier.back();
        frontier.pop_back();
        for (NodeId w : g.neighbors(u)) {
          if (support.contains(w) && reached.insert(w).second) frontier.push_back(w);
        }
      }
      CHECK(reached == support);

      const auto again = approximate_ppr(h, seed, alpha, eps);
      CHECK(again.ppr == r.ppr);
      for (std::size_t i = 0; i < r.ppr.entries.size(); ++i) {
        CHECK(std::memcmp(&again.ppr.entries[i].mass, &r.ppr.entries[i].mass, sizeof(double)) == 0);
      }
    }
  }
}

TEST_CASE("property: smaller epsilon never shrinks the support") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Graph g = random_connected_graph(150, 250, seed * 7);
    const auto h = handle_of(g);
    std::set<NodeId> previous;
    for (double eps : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4}) {
      const auto r = approximate_ppr(h, 0, 0.15, eps);
      std::set<NodeId> support;
      for (const auto& e : r.ppr.entries) support.insert(e.node);
      CHECK(std::includes(support.begin(), support.end(), previous.begin(), previous.end()));
      previous = std::move(support);
    }
  }
}

TEST_CASE("stats: support volume is the degree sum over the support") {
  const Graph g = random_connected_graph(100, 200, 5);
  const auto h = handle_of(g);
  const auto r = approximate_ppr(h, 3, 0.15, 1e-3);
  std::uint64_t vol = 0;
  for (const auto& e : r.ppr.entries) vol += g.degree(e.node);
  CHECK(vol == r.stats.support_volume);
  CHECK(r.stats.nodes_touched == r.ppr.entries.size());
}
