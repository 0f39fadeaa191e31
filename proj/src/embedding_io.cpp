#include "iemb/embedding_io.hpp"

#include <charconv>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "iemb/errors.hpp"

namespace iemb {

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("to_chars failed");
  return std::string(buf, ptr);
}

std::string embedding_header(std::uint64_t graph_nodes, const EmbeddingMatrix& m) {
  std::string h = "#IE v" + std::to_string(kEmbeddingFormatVersion);
  h += " n=" + std::to_string(graph_nodes);
  h += " d=" + std::to_string(m.dim);
  h += " alpha=" + format_double(m.alpha);
  h += " epsilon=" + format_double(m.epsilon);
  h += " seed=" + std::to_string(m.master_seed);
  h += " log=nat";
  return h;
}

void write_embeddings_text(std::ostream& out, std::uint64_t graph_nodes, const EmbeddingMatrix& m,
                           std::span<const NodeId> node_ids) {
  if (node_ids.size() != m.rows) throw DomainError("node id count != matrix rows");
  out << embedding_header(graph_nodes, m) << '\n';
  std::string line;
  for (std::uint64_t i = 0; i < m.rows; ++i) {
    line = std::to_string(node_ids[i]);
    for (double x : m.row(i)) {
      line += ' ';
      line += format_double(x);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("failed writing embeddings");
}

void write_embeddings_binary(std::ostream& out, std::uint64_t graph_nodes,
                             const EmbeddingMatrix& m) {
  if (m.rows != graph_nodes) throw DomainError("binary embeddings must cover every node");
  const std::string header = embedding_header(graph_nodes, m) + '\n';
  char preamble[kBinaryPreambleBytes] = {};
  if (header.size() > sizeof(preamble)) throw std::logic_error("embedding header too long");
  std::memcpy(preamble, header.data(), header.size());
  out.write(preamble, sizeof(preamble));
  out.write(reinterpret_cast<const char*>(m.values.data()),
            static_cast<std::streamsize>(m.values.size() * sizeof(double)));
  if (!out) throw IoError("failed writing embeddings");
}

namespace {

std::map<std::string, std::string, std::less<>> parse_header(const std::string& line) {
  std::istringstream in(line);
  std::string token;
  in >> token;
  if (token != "#IE") throw FormatError("missing #IE embedding header");
  in >> token;
  if (token != "v" + std::to_string(kEmbeddingFormatVersion)) {
    throw FormatError("unsupported embedding format " + token);
  }
  std::map<std::string, std::string, std::less<>> fields;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw FormatError("bad header field " + token);
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  for (const char* key : {"n", "d", "alpha", "epsilon", "seed", "log"}) {
    if (!fields.contains(key)) throw FormatError(std::string("header lacks ") + key);
  }
  return fields;
}

template <class T>
T parse_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError("bad number '" + std::string(s) + "'");
  }
  return value;
}

LoadedEmbeddings from_header(const std::string& line) {
  auto fields = parse_header(line);
  LoadedEmbeddings out;
  out.graph_nodes = parse_number<std::uint64_t>(fields["n"]);
  out.matrix.dim = parse_number<std::uint64_t>(fields["d"]);
  out.matrix.alpha = parse_number<double>(fields["alpha"]);
  out.matrix.epsilon = parse_number<double>(fields["epsilon"]);
  out.matrix.master_seed = parse_number<std::uint64_t>(fields["seed"]);
  return out;
}

}  // namespace

LoadedEmbeddings read_embeddings_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty embedding file");
  LoadedEmbeddings out = from_header(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string token;
    row >> token;
    out.node_ids.push_back(parse_number<NodeId>(token));
    std::uint64_t count = 0;
    while (row >> token) {
      out.matrix.values.push_back(parse_number<double>(token));
      ++count;
    }
    if (count != out.matrix.dim) throw FormatError("embedding row has wrong length");
  }
  out.matrix.rows = out.node_ids.size();
  return out;
}

LoadedEmbeddings read_embeddings_binary(std::istream& in) {
  char preamble[kBinaryPreambleBytes];
  if (!in.read(preamble, sizeof(preamble))) throw FormatError("truncated embedding preamble");
  const char* nl = static_cast<const char*>(std::memchr(preamble, '\n', sizeof(preamble)));
  if (nl == nullptr) throw FormatError("embedding preamble lacks header line");
  LoadedEmbeddings out = from_header(std::string(preamble, static_cast<std::size_t>(nl - preamble)));
  out.matrix.rows = out.graph_nodes;
  out.matrix.values.resize(out.matrix.rows * out.matrix.dim);
  const auto bytes = static_cast<std::streamsize>(out.matrix.values.size() * sizeof(double));
  if (!in.read(reinterpret_cast<char*>(out.matrix.values.data()), bytes)) {
    throw FormatError("truncated embedding payload");
  }
  out.node_ids.resize(out.matrix.rows);
  for (std::uint64_t i = 0; i < out.matrix.rows; ++i) out.node_ids[i] = i;
  return out;
}

}  // namespace iemb
