#include <doctest.h>

#include <cmath>

#include "iemb/errors.hpp"
#include "iemb/generators.hpp"
#include "iemb/random.hpp"

using namespace iemb;

TEST_CASE("Rng: below is in range and roughly uniform") {
  Rng rng(1);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) counts[rng.below(7)]++;
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("erdos_renyi edge count, simplicity, determinism") {
  const std::uint64_t n = 20000;
  const double p = 10.0 / (n - 1);
  const Graph g = erdos_renyi(n, p, 5);
  const double m = static_cast<double>(g.endpoint_count()) / 2.0;
  const double expected = p * n * (n - 1) / 2.0;
  CHECK(std::abs(m - expected) < 5 * std::sqrt(expected));
  for (NodeId v = 0; v < n; v += 97) {
    for (NodeId w : g.neighbors(v)) CHECK(w != v);
  }
  CHECK(erdos_renyi(n, p, 5) == g);
  CHECK(erdos_renyi(10, 1.0, 1).endpoint_count() == 90);
  CHECK(erdos_renyi(10, 0.0, 1).endpoint_count() == 0);
  CHECK_THROWS_AS(erdos_renyi(10, 1.5, 1), DomainError);
}

TEST_CASE("stochastic block model densities") {
  const auto sbm = stochastic_block_model({200, 200}, 0.2, 0.01, 3);
  REQUIRE(sbm.block.size() == 400);
  double within = 0, between = 0;
  for (const auto& [u, v] : sbm.graph.edges()) (sbm.block[u] == sbm.block[v] ? within : between) += 1;
  const double within_pairs = 2 * 200.0 * 199.0 / 2.0;
  const double between_pairs = 200.0 * 200.0;
  CHECK(std::abs(within / within_pairs - 0.2) < 0.01);
  CHECK(std::abs(between / between_pairs - 0.01) < 0.003);
  CHECK(stochastic_block_model({200, 200}, 0.2, 0.01, 3).graph == sbm.graph);
}
