#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "iemb/embedder.hpp"
#include "iemb/errors.hpp"
#include "iemb/eval.hpp"
#include "iemb/feature_hashing.hpp"
#include "iemb/generators.hpp"
#include "iemb/graph_store.hpp"
#include "iemb/ppr.hpp"

namespace py = pybind11;
using namespace iemb;

namespace {

EmbedConfig make_config(std::uint64_t dim, double alpha, double epsilon, std::uint64_t seed) {
  EmbedConfig cfg;
  cfg.alpha = alpha;
  cfg.epsilon = epsilon;
  cfg.seeds = HashSeeds(seed, dim);
  cfg.validate();
  return cfg;
}

py::array_t<double> to_numpy(std::vector<double> values) {
  auto* heap = new std::vector<double>(std::move(values));
  py::capsule owner(heap, [](void* p) { delete static_cast<std::vector<double>*>(p); });
  return py::array_t<double>(static_cast<py::ssize_t>(heap->size()), heap->data(), owner);
}

py::dict stats_dict(const PushStats& s) {
  py::dict d;
  d["push_count"] = s.push_count;
  d["nodes_touched"] = s.nodes_touched;
  d["support_volume"] = s.support_volume;
  d["degree_lookups"] = s.degree_lookups;
  d["state_peak_bytes"] = s.state_peak_bytes;
  d["slice_bytes"] = s.slice_bytes;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Local node embeddings from approximate personalized PageRank";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_OSError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<OutOfRangeError>(m, "OutOfRangeError", PyExc_IndexError);

  py::class_<GraphHandle>(m, "Graph")
      .def_static(
          "from_edges",
          [](std::uint64_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
            return GraphHandle::in_memory(Graph::from_edges(n, edges));
          },
          py::arg("node_count"), py::arg("edges"))
      .def_static(
          "from_edge_list", [](const std::filesystem::path& p) { return GraphHandle::in_memory(load_edge_list(p)); },
          py::arg("path"))
      .def_static("open", &open_binary, py::arg("path"), "Memory-map a binary CSR file.")
      .def_property_readonly("node_count", &GraphHandle::node_count)
      .def_property_readonly("endpoint_count", &GraphHandle::endpoint_count)
      .def_property_readonly("file_backed", &GraphHandle::file_backed)
      .def("degree", &GraphHandle::degree, py::arg("node"))
      .def(
          "neighbors",
          [](const GraphHandle& g, NodeId v) {
            const auto s = g.neighbors(v);
            return std::vector<NodeId>(s.begin(), s.end());
          },
          py::arg("node"))
      .def("edges", [](const GraphHandle& g) { return g.materialize().edges(); })
      .def(
          "save", [](const GraphHandle& g, const std::filesystem::path& p) { write_binary(g.materialize(), p); },
          py::arg("path"))
      .def("stats",
           [](const GraphHandle& g) {
             const auto s = g.stats();
             py::dict d;
             d["nodes_touched"] = s.nodes_touched;
             d["slice_reads"] = s.slice_reads;
             d["degree_reads"] = s.degree_reads;
             d["bytes_read"] = s.bytes_read;
             return d;
           })
      .def("reset_stats", &GraphHandle::reset_stats)
      .def("__len__", &GraphHandle::node_count);

  m.def(
      "approximate_ppr",
      [](const GraphHandle& g, NodeId source, double alpha, double epsilon) {
        PprResult r;
        {
          py::gil_scoped_release release;
          r = approximate_ppr(g, source, alpha, epsilon);
        }
        py::dict masses;
        for (const auto& e : r.ppr.entries) masses[py::int_(e.node)] = e.mass;
        return py::make_tuple(masses, stats_dict(r.stats));
      },
      py::arg("graph"), py::arg("source"), py::arg("alpha") = kDefaultAlpha, py::arg("epsilon") = kDefaultEpsilon,
      "Returns ({node: mass}, stats).");

  m.def(
      "exact_ppr",
      [](const GraphHandle& g, NodeId source, double alpha, double tol) {
        return to_numpy(exact_ppr(g, source, alpha, tol));
      },
      py::arg("graph"), py::arg("source"), py::arg("alpha") = kDefaultAlpha, py::arg("tol") = 1e-12);

  m.def("mix64", &mix64, py::arg("x"));
  m.def(
      "hash_dim", [](std::uint64_t key, std::uint64_t seed, std::uint64_t dim) { return hash_dim(key, HashSeeds(seed, dim)); },
      py::arg("key"), py::arg("seed"), py::arg("dim"));
  m.def(
      "hash_sign", [](std::uint64_t key, std::uint64_t seed) { return hash_sign(key, HashSeeds(seed, 1)); },
      py::arg("key"), py::arg("seed"));
  m.def(
      "project",
      [](const std::vector<std::pair<std::uint64_t, double>>& entries, std::uint64_t seed, std::uint64_t dim) {
        std::vector<SparseEntry> x;
        x.reserve(entries.size());
        for (const auto& [k, v] : entries) x.push_back({k, v});
        return to_numpy(project(x, HashSeeds(seed, dim)));
      },
      py::arg("entries"), py::arg("seed"), py::arg("dim"));
  m.def("transform_mass", &transform_mass, py::arg("mass"), py::arg("node_count"));

  m.def(
      "instant_embedding",
      [](const GraphHandle& g, NodeId v, std::uint64_t dim, double alpha, double epsilon, std::uint64_t seed) {
        const auto cfg = make_config(dim, alpha, epsilon, seed);
        EmbeddingVector w;
        {
          py::gil_scoped_release release;
          w = instant_embedding(g, v, cfg);
        }
        return to_numpy(std::move(w.values));
      },
      py::arg("graph"), py::arg("node"), py::arg("dim") = kDefaultDim, py::arg("alpha") = kDefaultAlpha,
      py::arg("epsilon") = kDefaultEpsilon, py::arg("seed") = kDefaultSeed);

  m.def(
      "graph_embedding",
      [](const GraphHandle& g, std::uint64_t dim, double alpha, double epsilon, std::uint64_t seed,
         unsigned workers) {
        const auto cfg = make_config(dim, alpha, epsilon, seed);
        EmbeddingMatrix mat;
        {
          py::gil_scoped_release release;
          mat = graph_embedding(g, cfg, workers);
        }
        auto flat = to_numpy(std::move(mat.values));
        return flat.reshape({static_cast<py::ssize_t>(mat.rows), static_cast<py::ssize_t>(mat.dim)});
      },
      py::arg("graph"), py::arg("dim") = kDefaultDim, py::arg("alpha") = kDefaultAlpha,
      py::arg("epsilon") = kDefaultEpsilon, py::arg("seed") = kDefaultSeed, py::arg("workers") = 1);

  m.def(
      "edge_feature",
      [](const std::vector<double>& wu, const std::vector<double>& wv, const std::string& strategy) -> py::object {
        auto f = edge_feature(wu, wv, parse_strategy(strategy));
        if (auto* s = std::get_if<double>(&f)) return py::float_(*s);
        return to_numpy(std::get<std::vector<double>>(std::move(f)));
      },
      py::arg("wu"), py::arg("wv"), py::arg("strategy"));

  m.def(
      "roc_auc",
      [](const std::vector<double>& scores, const std::vector<bool>& labels) {
        if (scores.size() != labels.size()) throw DomainError("roc_auc: scores and labels differ in length");
        std::vector<ScoredLabel> s;
        for (std::size_t i = 0; i < scores.size(); ++i) s.push_back({scores[i], labels[i]});
        return roc_auc(s);
      },
      py::arg("scores"), py::arg("labels"));

  m.def(
      "erdos_renyi", [](std::uint64_t n, double p, std::uint64_t seed) { return GraphHandle::in_memory(erdos_renyi(n, p, seed)); },
      py::arg("n"), py::arg("p"), py::arg("seed") = kDefaultSeed);
  m.def(
      "stochastic_block_model",
      [](const std::vector<std::uint64_t>& sizes, double p_in, double p_out, std::uint64_t seed) {
        auto sbm = stochastic_block_model(sizes, p_in, p_out, seed);
        return py::make_tuple(GraphHandle::in_memory(std::move(sbm.graph)), sbm.block);
      },
      py::arg("block_sizes"), py::arg("p_in"), py::arg("p_out"), py::arg("seed") = kDefaultSeed,
      "Returns (graph, block id per node).");
}
