#include <doctest.h>

#include <cstring>
#include <fstream>
#include <thread>

#include "iemb/errors.hpp"
#include "iemb/graph_store.hpp"
#include "test_support.hpp"

using namespace iemb;
using iemb::testing::random_graph;
using iemb::testing::temp_path;

namespace {

std::vector<NodeId> as_vector(std::span<const NodeId> s) { return {s.begin(), s.end()}; }

void check_invariants(const Graph& g) {
  const auto offsets = g.offsets();
  REQUIRE(offsets.front() == 0);
  REQUIRE(offsets.back() == g.endpoint_count());
  std::uint64_t degree_sum = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto nb = g.neighbors(v);
    degree_sum += nb.size();
    for (std::size_t i = 0; i < nb.size(); ++i) {
      REQUIRE(nb[i] < g.node_count());
      if (i > 0) REQUIRE(nb[i - 1] < nb[i]);
      REQUIRE(g.has_edge(nb[i], v));
    }
  }
  REQUIRE(degree_sum == g.endpoint_count());
}

}  // namespace

TEST_CASE("edge list: path graph") {
  const Graph g = parse_edge_list("0 1\n1 2");
  CHECK(g.node_count() == 3);
  CHECK(g.endpoint_count() == 4);
  CHECK(as_vector(g.neighbors(1)) == std::vector<NodeId>{0, 2});
  CHECK(std::vector<std::uint64_t>(g.offsets().begin(), g.offsets().end()) ==
        std::vector<std::uint64_t>{0, 1, 3, 4});
}

TEST_CASE("edge list: duplicates collapse") {
  const Graph g = parse_edge_list("0 1\n1 0\n0 1");
  CHECK(g.node_count() == 2);
  CHECK(g.endpoint_count() == 2);
}

TEST_CASE("edge list: self-loop kept once") {
  const Graph g = parse_edge_list("0 0");
  CHECK(g.node_count() == 1);
  CHECK(as_vector(g.neighbors(0)) == std::vector<NodeId>{0});
  CHECK(g.degree(0) == 1);
}

TEST_CASE("edge list: comments, blank lines, tabs, CRLF") {
  const Graph g = parse_edge_list("# header\n% another\n\n0\t2\r\n  2 3 \n");
  CHECK(g.node_count() == 4);
  CHECK(g.degree(1) == 0);
  CHECK(as_vector(g.neighbors(2)) == std::vector<NodeId>{0, 3});
}

TEST_CASE("edge list: empty input is the empty graph") {
  CHECK(parse_edge_list("").node_count() == 0);
  CHECK(parse_edge_list("# only a comment\n").node_count() == 0);
}

TEST_CASE("edge list: malformed lines") {
  CHECK_THROWS_AS(parse_edge_list("0 -1\n"), FormatError);
  CHECK_THROWS_AS(parse_edge_list("0\n"), FormatError);
  CHECK_THROWS_AS(parse_edge_list("0 1 2\n"), FormatError);
  CHECK_THROWS_AS(parse_edge_list("a b\n"), FormatError);
  CHECK_THROWS_AS(load_edge_list(temp_path("does-not-exist.txt")), IoError);
}

TEST_CASE("directed input flag gives the same undirected graph") {
  CHECK(parse_edge_list("0 1\n2 1\n", true) == parse_edge_list("1 0\n1 2\n", false));
}

TEST_CASE("Graph constructor validates") {
  CHECK_THROWS_AS(Graph({0, 1}, {1}), DomainError);              // entry >= n
  CHECK_THROWS_AS(Graph({0, 1, 1}, {1}), DomainError);           // asymmetric
  CHECK_THROWS_AS(Graph({0, 2, 4}, {1, 1, 0, 0}), DomainError);  // parallel
  CHECK_THROWS_AS(Graph({1, 1}, {}), DomainError);
  CHECK_NOTHROW(Graph({0, 1, 2}, {1, 0}));
}

TEST_CASE("neighbors and degree") {
  const Graph triangle = parse_edge_list("0 1\n1 2\n2 0\n");
  CHECK(as_vector(triangle.neighbors(0)) == std::vector<NodeId>{1, 2});
  const Graph isolated = parse_edge_list("0 2\n");
  CHECK(isolated.neighbors(1).empty());
  CHECK(isolated.degree(1) == 0);
  const Graph k2 = parse_edge_list("0 1\n");
  CHECK(k2.degree(0) == 1);
  CHECK(k2.degree(1) == 1);
  CHECK_THROWS_AS(k2.neighbors(2), OutOfRangeError);
}

TEST_CASE("property: ingested graphs are symmetric, sorted, degree sum m2") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    check_invariants(random_graph(1 + seed * 7, seed * 13, seed));
  }
}

TEST_CASE("binary round trip") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = random_graph(seed * 11, seed * 29, seed);
    const auto path = temp_path("roundtrip.iecs");
    write_binary(g, path);
    const auto h = open_binary(path);
    CHECK(h.file_backed());
    CHECK(h.materialize() == g);
  }
}

TEST_CASE("binary layout of the path graph") {
  const auto path = temp_path("path.iecs");
  write_binary(parse_edge_list("0 1\n1 2"), path);
  const std::string bytes = iemb::testing::read_file(path);
  REQUIRE(bytes.size() == 24 + 8 * 4 + 8 * 4);
  CHECK(bytes.substr(0, 4) == "IECS");
  CHECK(bytes[4] == 1);
  CHECK(bytes.substr(5, 3) == std::string(3, '\0'));
  std::uint64_t words[10];
  std::memcpy(words, bytes.data() + 8, sizeof(words));
  CHECK(words[0] == 3);  // n
  CHECK(words[1] == 4);  // m2
  CHECK(std::vector<std::uint64_t>(words + 2, words + 6) == std::vector<std::uint64_t>{0, 1, 3, 4});
  CHECK(std::vector<std::uint64_t>(words + 6, words + 10) == std::vector<std::uint64_t>{1, 0, 2, 1});
}

TEST_CASE("empty graph writes header plus one offset") {
  const auto path = temp_path("empty.iecs");
  write_binary(Graph(), path);
  CHECK(std::filesystem::file_size(path) == 24 + 8);
  const auto h = open_binary(path);
  CHECK(h.node_count() == 0);
  CHECK_THROWS_AS(h.neighbors(0), OutOfRangeError);
}

TEST_CASE("open_binary rejects bad files") {
  const auto path = temp_path("bad.iecs");
  write_binary(parse_edge_list("0 1\n1 2"), path);
  std::string bytes = iemb::testing::read_file(path);

  auto write = [&](const std::string& b) { std::ofstream(path, std::ios::binary) << b; };
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  write(bad_magic);
  CHECK_THROWS_AS(open_binary(path), FormatError);

  std::string bad_version = bytes;
  bad_version[4] = 2;
  write(bad_version);
  CHECK_THROWS_AS(open_binary(path), FormatError);

  write(bytes.substr(0, bytes.size() - 8));
  CHECK_THROWS_AS(open_binary(path), FormatError);

  write(bytes.substr(0, 10));
  CHECK_THROWS_AS(open_binary(path), FormatError);

  CHECK_THROWS_AS(open_binary(temp_path("missing.iecs")), IoError);
}

TEST_CASE("selective reads update counters") {
  const auto path = temp_path("counters.iecs");
  write_binary(parse_edge_list("0 1\n1 2\n2 3\n"), path);
  const auto h = open_binary(path);
  CHECK(h.stats().nodes_touched == 0);
  CHECK(std::vector<NodeId>(h.neighbors(1).begin(), h.neighbors(1).end()) ==
        std::vector<NodeId>{0, 2});
  // neighbors(1) called twice above, one distinct node
  CHECK(h.stats().nodes_touched == 1);
  CHECK(h.stats().slice_reads == 2);
  CHECK(h.stats().bytes_read == 2 * (16 + 16));
  CHECK(h.degree(3) == 1);
  CHECK(h.stats().nodes_touched == 1);
  CHECK(h.stats().degree_reads == 1);
  h.neighbors(3);
  CHECK(h.stats().nodes_touched == 2);
  CHECK_THROWS_AS(h.neighbors(4), OutOfRangeError);
  h.reset_stats();
  CHECK(h.stats().nodes_touched == 0);
}

TEST_CASE("concurrent readers share counters") {
  const Graph g = random_graph(500, 2000, 9);
  const auto h = GraphHandle::in_memory(g);
  std::vector<std::jthread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (NodeId v = 0; v < g.node_count(); ++v) {
        REQUIRE(h.neighbors(v).size() == g.degree(v));
      }
    });
  }
  threads.clear();
  CHECK(h.stats().nodes_touched == g.node_count());
  CHECK(h.stats().slice_reads == 4 * g.node_count());
}
