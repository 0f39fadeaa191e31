#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <thread>

#include "iemb/embedder.hpp"
#include "iemb/embedding_io.hpp"
#include "iemb/errors.hpp"
#include "iemb/eval.hpp"
#include "iemb/generators.hpp"
#include "iemb/graph_store.hpp"
#include "iemb/ppr.hpp"
#include "iemb/random.hpp"

namespace iemb::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr int kReportVersion = 1;

struct EmbedFlags {
  double alpha = kDefaultAlpha;
  double epsilon = kDefaultEpsilon;
  std::uint64_t dim = kDefaultDim;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;

  EmbedConfig config() const {
    EmbedConfig cfg;
    cfg.alpha = alpha;
    cfg.epsilon = epsilon;
    cfg.seeds = HashSeeds(seed, dim);
    return cfg;
  }
};

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
      double v = 0;
      try {
        v = std::stod(s);
      } catch (...) {
        return "not a number: " + s;
      }
      return (v > 0.0 && v < 1.0) ? std::string() : "value " + s + " not in (0, 1)";
    },
    "in (0,1)");

const CLI::Validator kHalfOpenUnit(
    [](std::string& s) -> std::string {
      double v = 0;
      try {
        v = std::stod(s);
      } catch (...) {
        return "not a number: " + s;
      }
      return (v > 0.0 && v <= 1.0) ? std::string() : "value " + s + " not in (0, 1]";
    },
    "in (0,1]");

void add_alpha_epsilon(CLI::App* cmd, EmbedFlags& f) {
  cmd->add_option("--alpha", f.alpha, "PPR decay (restart probability)")
      ->capture_default_str()
      ->check(kOpenUnit);
  cmd->add_option("--epsilon", f.epsilon, "PPR precision")->capture_default_str()->check(kHalfOpenUnit);
}

void add_embed_flags(CLI::App* cmd, EmbedFlags& f) {
  add_alpha_epsilon(cmd, f);
  cmd->add_option("--dim", f.dim, "embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "master hash seed")->capture_default_str();
  cmd->add_option("--workers", f.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
}

json config_json(const EmbedFlags& f) {
  return json{{"alpha", f.alpha}, {"epsilon", f.epsilon}, {"dim", f.dim},
              {"seed", f.seed},   {"workers", f.workers}, {"log", "nat"}};
}

json summary_json(const Summary& s) {
  return json{{"mean", s.mean}, {"half_width_90", s.half_width_90}, {"values", s.values}};
}

void warn_small_epsilon(const GraphHandle& g, double epsilon, std::ostream& err) {
  if (g.node_count() > 0 && epsilon <= 1.0 / static_cast<double>(g.node_count())) {
    err << "warning: epsilon " << format_double(epsilon) << " <= 1/n (n=" << g.node_count()
        << "); the local computation may cover the whole graph\n";
  }
}

// Writes to `path`, or to `out` when path is empty or "-".
template <class Fn>
void emit(const std::string& path, std::ostream& out, bool binary, Fn&& write) {
  if (path.empty() || path == "-") {
    write(out);
    out.flush();
    return;
  }
  std::ofstream file(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  write(file);
  file.flush();
  if (!file) throw IoError("write failed for " + path);
}

std::vector<NodeId> read_node_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open node list " + path);
  std::vector<NodeId> nodes;
  std::string token;
  while (in >> token) {
    if (token.starts_with('#')) {
      std::getline(in, token);
      continue;
    }
    NodeId v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw FormatError("node list: invalid id '" + token + "'");
    }
    nodes.push_back(v);
  }
  return nodes;
}

double percentile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return values[lo] + (values[hi] - values[lo]) * (pos - static_cast<double>(lo));
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// --- subcommands -----------------------------------------------------------

struct ConvertArgs {
  std::string input, output;
  bool directed = false;
};

int do_convert(const ConvertArgs& a, std::ostream& out) {
  const Graph g = load_edge_list(a.input, a.directed);
  write_binary(g, a.output);
  out << "wrote " << a.output << " n=" << g.node_count() << " m2=" << g.endpoint_count() << '\n';
  return kOk;
}

struct PprArgs {
  std::string graph, output;
  NodeId node = 0;
  EmbedFlags flags;
};

int do_ppr(const PprArgs& a, std::ostream& out, std::ostream& err) {
  const auto g = open_binary(a.graph);
  warn_small_epsilon(g, a.flags.epsilon, err);
  const auto result = approximate_ppr(g, a.node, a.flags.alpha, a.flags.epsilon);
  emit(a.output, out, false, [&](std::ostream& os) {
    std::string line;
    for (const auto& [node, mass] : result.ppr.entries) {
      line = std::to_string(node);
      line += ' ';
      line += format_double(mass);
      line += '\n';
      os << line;
    }
  });
  return kOk;
}

struct EmbedArgs {
  std::string graph, output, nodes_file, format = "text", report;
  std::optional<NodeId> node;
  bool all = false;
  EmbedFlags flags;
};

int do_embed(const EmbedArgs& a, std::ostream& out, std::ostream& err) {
  const int selectors = (a.node ? 1 : 0) + (a.nodes_file.empty() ? 0 : 1) + (a.all ? 1 : 0);
  if (selectors != 1) throw DomainError("embed: give exactly one of --node, --nodes, --all");
  if (a.format == "binary" && !a.all) throw DomainError("embed: binary format requires --all");

  const auto g = open_binary(a.graph);
  warn_small_epsilon(g, a.flags.epsilon, err);
  const EmbedConfig cfg = a.flags.config();

  std::vector<NodeId> nodes;
  if (a.node) {
    nodes.push_back(*a.node);
  } else if (!a.nodes_file.empty()) {
    nodes = read_node_list(a.nodes_file);
  } else {
    nodes.resize(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) nodes[v] = v;
  }

  const auto start = std::chrono::steady_clock::now();
  const EmbeddingMatrix m = embed_nodes(g, nodes, cfg, a.flags.workers);
  const auto wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();

  emit(a.output, out, a.format == "binary", [&](std::ostream& os) {
    if (a.format == "binary") {
      write_embeddings_binary(os, g.node_count(), m);
    } else {
      write_embeddings_text(os, g.node_count(), m, nodes);
    }
  });

  if (!a.report.empty()) {
    const auto stats = g.stats();
    json report{{"report_version", kReportVersion},
                {"subcommand", "embed"},
                {"config", config_json(a.flags)},
                {"graph", {{"path", a.graph}, {"n", g.node_count()}, {"m2", g.endpoint_count()}}},
                {"rows", m.rows},
                {"wall_ns", wall_ns},
                {"nodes_touched", stats.nodes_touched},
                {"bytes_read", stats.bytes_read},
                {"outputs", json::array({a.output.empty() ? "-" : a.output})}};
    emit(a.report, out, false, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
  }
  return kOk;
}

struct LinkPredArgs {
  std::string graph, output, strategy = "all";
  int repeats = 3;
  double l2 = 1.0;
  EmbedFlags flags;
};

int do_linkpred(const LinkPredArgs& a, std::ostream& out, std::ostream& err) {
  const auto handle = open_binary(a.graph);
  warn_small_epsilon(handle, a.flags.epsilon, err);
  const Graph g = handle.materialize();

  LinkPredConfig cfg;
  cfg.embed = a.flags.config();
  cfg.workers = a.flags.workers;
  cfg.repeats = a.repeats;
  cfg.seed = a.flags.seed;
  cfg.logreg.l2 = a.l2;
  if (a.strategy != "all") cfg.strategies = {parse_strategy(a.strategy)};

  const auto report = run_link_prediction(g, cfg);
  json strategies = json::object();
  for (const auto& s : report.strategies) {
    strategies[std::string(strategy_name(s.strategy))] = {
        {"test_auc", summary_json(s.test_auc)}, {"validation_auc", summary_json(s.validation_auc)}};
  }
  json j{{"report_version", kReportVersion},
         {"subcommand", "linkpred"},
         {"config", config_json(a.flags)},
         {"repeats", a.repeats},
         {"l2", a.l2},
         {"graph", {{"path", a.graph}, {"n", g.node_count()}, {"m2", g.endpoint_count()}}},
         {"strategies", strategies},
         {"best_on_validation", report.best_on_validation},
         {"best_test_auc", summary_json(report.best_test_auc)},
         {"shuffled_dot_auc", summary_json(report.shuffled_dot_auc)}};
  emit(a.output, out, false, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kOk;
}

struct ClassifyArgs {
  std::string graph, labels, output;
  double train_frac = 0.1;
  int repeats = 3;
  double l2 = 1.0;
  EmbedFlags flags;
};

int do_classify(const ClassifyArgs& a, std::ostream& out, std::ostream& err) {
  const auto handle = open_binary(a.graph);
  warn_small_epsilon(handle, a.flags.epsilon, err);
  const Graph g = handle.materialize();
  const LabelSet labels = load_labels(a.labels, g.node_count());

  ClassifyConfig cfg;
  cfg.embed = a.flags.config();
  cfg.workers = a.flags.workers;
  cfg.repeats = a.repeats;
  cfg.train_fraction = a.train_frac;
  cfg.seed = a.flags.seed;
  cfg.logreg.l2 = a.l2;

  const auto report = run_classification(g, labels, cfg);
  json j{{"report_version", kReportVersion},
         {"subcommand", "classify"},
         {"config", config_json(a.flags)},
         {"repeats", a.repeats},
         {"train_fraction", a.train_frac},
         {"l2", a.l2},
         {"graph", {{"path", a.graph}, {"n", g.node_count()}, {"m2", g.endpoint_count()}}},
         {"labels", {{"path", a.labels}, {"classes", labels.num_classes}}},
         {"train_nodes", report.train_nodes},
         {"test_nodes", report.test_nodes},
         {"micro_f1", summary_json(report.micro_f1)},
         {"macro_f1", summary_json(report.macro_f1)}};
  emit(a.output, out, false, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kOk;
}

struct BenchArgs {
  std::string graph, output;
  std::uint64_t samples = 100;
  EmbedFlags flags;
};

int do_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const auto g = open_binary(a.graph);
  if (g.node_count() == 0) throw DomainError("bench: graph has no nodes");
  warn_small_epsilon(g, a.flags.epsilon, err);
  const EmbedConfig cfg = a.flags.config();

  Rng rng(a.flags.seed);
  std::vector<NodeId> nodes(a.samples);
  for (auto& v : nodes) v = rng.below(g.node_count());

  struct Record {
    std::int64_t wall_ns = 0;
    PushStats stats;
  };
  std::vector<Record> records(nodes.size());
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto start = std::chrono::steady_clock::now();
      auto w = instant_embedding(g, nodes[i], cfg, &records[i].stats);
      records[i].wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                               std::chrono::steady_clock::now() - start)
                               .count();
      if (w.values.size() != cfg.dim()) throw std::logic_error("bench: bad embedding size");
    }
  };
  const unsigned workers = std::min<unsigned>(a.flags.workers, static_cast<unsigned>(nodes.size()));
  if (workers <= 1) {
    run_range(0, nodes.size());
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back(run_range, nodes.size() * w / workers, nodes.size() * (w + 1) / workers);
    }
  }

  std::vector<double> wall, touched, pushes, state, working;
  json items = json::array();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& r = records[i];
    wall.push_back(static_cast<double>(r.wall_ns));
    touched.push_back(static_cast<double>(r.stats.nodes_touched));
    pushes.push_back(static_cast<double>(r.stats.push_count));
    state.push_back(static_cast<double>(r.stats.state_peak_bytes));
    working.push_back(static_cast<double>(r.stats.state_peak_bytes + r.stats.slice_bytes));
    items.push_back({{"node", nodes[i]},
                     {"wall_ns", r.wall_ns},
                     {"nodes_touched", r.stats.nodes_touched},
                     {"push_count", r.stats.push_count},
                     {"support_volume", r.stats.support_volume},
                     {"state_peak_bytes", r.stats.state_peak_bytes},
                     {"slice_bytes", r.stats.slice_bytes}});
  }
  const double bound = 2.0 / ((1.0 - a.flags.alpha) * a.flags.epsilon);
  json j{{"report_version", kReportVersion},
         {"subcommand", "bench"},
         {"config", config_json(a.flags)},
         {"samples", a.samples},
         {"graph", {{"path", a.graph}, {"n", g.node_count()}, {"m2", g.endpoint_count()}}},
         {"summary",
          {{"wall_ns_mean", mean_of(wall)},
           {"wall_ns_median", percentile(wall, 0.5)},
           {"wall_ns_p95", percentile(wall, 0.95)},
           {"nodes_touched_mean", mean_of(touched)},
           {"nodes_touched_max", *std::max_element(touched.begin(), touched.end())},
           {"nodes_touched_bound", bound},
           {"push_count_mean", mean_of(pushes)},
           {"state_bytes_mean", mean_of(state)},
           {"working_set_bytes_mean", mean_of(working)}}},
         {"items", items},
         {"outputs", json::array({a.output.empty() ? "-" : a.output})}};
  emit(a.output, out, false, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  return kOk;
}

struct GenerateArgs {
  std::string model = "sbm", output, edges_out, labels_out;
  std::uint64_t nodes = 1000;
  double avg_degree = 10.0;
  std::uint64_t blocks = 2;
  std::uint64_t block_size = 200;
  double p_in = 0.2, p_out = 0.01;
  std::uint64_t seed = kDefaultSeed;
};

int do_generate(const GenerateArgs& a, std::ostream& out) {
  Graph g;
  std::vector<std::uint32_t> block;
  if (a.model == "er") {
    const double p = a.nodes > 1 ? a.avg_degree / static_cast<double>(a.nodes - 1) : 0.0;
    g = erdos_renyi(a.nodes, std::min(p, 1.0), a.seed);
  } else if (a.model == "sbm") {
    auto sbm = stochastic_block_model(std::vector<std::uint64_t>(a.blocks, a.block_size), a.p_in,
                                      a.p_out, a.seed);
    g = std::move(sbm.graph);
    block = std::move(sbm.block);
  } else {
    throw DomainError("generate: unknown model " + a.model);
  }
  write_binary(g, a.output);
  if (!a.edges_out.empty()) {
    emit(a.edges_out, out, false, [&](std::ostream& os) {
      for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
    });
  }
  if (!a.labels_out.empty()) {
    if (block.empty()) throw DomainError("generate: --labels-out needs the sbm model");
    emit(a.labels_out, out, false, [&](std::ostream& os) {
      for (std::size_t v = 0; v < block.size(); ++v) os << v << ' ' << block[v] << '\n';
    });
  }
  out << "wrote " << a.output << " n=" << g.node_count() << " m2=" << g.endpoint_count() << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local node embeddings from approximate personalized PageRank", "iembed"};
  app.require_subcommand(1);

  ConvertArgs convert;
  auto* c_convert = app.add_subcommand("convert", "edge list text -> binary CSR graph");
  c_convert->add_option("--input", convert.input, "edge list file")->required();
  c_convert->add_option("--output", convert.output, "binary graph (.iecs)")->required();
  c_convert->add_flag("--directed", convert.directed, "input lists each edge in one direction");

  PprArgs ppr;
  auto* c_ppr = app.add_subcommand("ppr", "approximate personalized PageRank of one node");
  c_ppr->add_option("--graph", ppr.graph, "binary graph (.iecs)")->required();
  c_ppr->add_option("--node", ppr.node, "source node id")->required();
  add_alpha_epsilon(c_ppr, ppr.flags);
  c_ppr->add_option("--output", ppr.output, "output file (default stdout)");

  EmbedArgs embed;
  auto* c_embed = app.add_subcommand("embed", "embed one node, a list of nodes, or all nodes");
  c_embed->add_option("--graph", embed.graph, "binary graph (.iecs)")->required();
  c_embed->add_option("--node", embed.node, "single node id");
  c_embed->add_option("--nodes", embed.nodes_file, "file of node ids");
  c_embed->add_flag("--all", embed.all, "embed every node");
  add_embed_flags(c_embed, embed.flags);
  c_embed->add_option("--output", embed.output, "output file (default stdout)");
  c_embed->add_option("--format", embed.format, "text or binary")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "binary"}));
  c_embed->add_option("--report", embed.report, "write a JSON run report here");

  LinkPredArgs lp;
  auto* c_lp = app.add_subcommand("linkpred", "link-prediction ROC-AUC on a random edge split");
  c_lp->add_option("--graph", lp.graph, "binary graph (.iecs)")->required();
  add_embed_flags(c_lp, lp.flags);
  c_lp->add_option("--strategy", lp.strategy, "all|dot|cosine|hadamard|average|l1|l2")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "dot", "cosine", "hadamard", "average", "l1", "l2"}));
  c_lp->add_option("--repeats", lp.repeats, "seeded repeats")->capture_default_str()->check(CLI::PositiveNumber);
  c_lp->add_option("--l2", lp.l2, "logistic regression L2 strength")->capture_default_str()->check(CLI::NonNegativeNumber);
  c_lp->add_option("--output", lp.output, "JSON report (default stdout)");

  ClassifyArgs cl;
  auto* c_cl = app.add_subcommand("classify", "one-vs-rest top-K node classification");
  c_cl->add_option("--graph", cl.graph, "binary graph (.iecs)")->required();
  c_cl->add_option("--labels", cl.labels, "label file: '<node> <label>' lines")->required();
  c_cl->add_option("--train-frac", cl.train_frac, "fraction of labeled nodes used for training")
      ->capture_default_str()
      ->check(kOpenUnit);
  c_cl->add_option("--repeats", cl.repeats, "seeded repeats")->capture_default_str()->check(CLI::PositiveNumber);
  c_cl->add_option("--l2", cl.l2, "logistic regression L2 strength")->capture_default_str()->check(CLI::NonNegativeNumber);
  add_embed_flags(c_cl, cl.flags);
  c_cl->add_option("--output", cl.output, "JSON report (default stdout)");

  BenchArgs bench;
  auto* c_bench = app.add_subcommand("bench", "per-node embedding time and locality statistics");
  c_bench->add_option("--graph", bench.graph, "binary graph (.iecs)")->required();
  c_bench->add_option("--samples", bench.samples, "number of sampled nodes")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_embed_flags(c_bench, bench.flags);
  c_bench->add_option("--output", bench.output, "JSON report (default stdout)");

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "synthetic Erdos-Renyi or block-model graph");
  c_gen->add_option("--model", gen.model, "er or sbm")->capture_default_str()->check(CLI::IsMember({"er", "sbm"}));
  c_gen->add_option("--output", gen.output, "binary graph (.iecs)")->required();
  c_gen->add_option("--nodes", gen.nodes, "node count (er)")->capture_default_str();
  c_gen->add_option("--avg-degree", gen.avg_degree, "expected degree (er)")->capture_default_str();
  c_gen->add_option("--blocks", gen.blocks, "block count (sbm)")->capture_default_str();
  c_gen->add_option("--block-size", gen.block_size, "nodes per block (sbm)")->capture_default_str();
  c_gen->add_option("--p-in", gen.p_in, "within-block edge probability (sbm)")->capture_default_str();
  c_gen->add_option("--p-out", gen.p_out, "between-block edge probability (sbm)")->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  c_gen->add_option("--edges-out", gen.edges_out, "also write the edge list here");
  c_gen->add_option("--labels-out", gen.labels_out, "write block labels here (sbm)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (c_convert->parsed()) return do_convert(convert, out);
    if (c_ppr->parsed()) return do_ppr(ppr, out, err);
    if (c_embed->parsed()) return do_embed(embed, out, err);
    if (c_lp->parsed()) return do_linkpred(lp, out, err);
    if (c_cl->parsed()) return do_classify(cl, out, err);
    if (c_bench->parsed()) return do_bench(bench, out, err);
    if (c_gen->parsed()) return do_generate(gen, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const OutOfRangeError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const NodeEmbeddingError& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  err << "no subcommand given\n";
  return kUsage;
}

}  // namespace iemb::cli
