#include "iemb/graph_store.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "iemb/errors.hpp"

namespace iemb {

static_assert(std::endian::native == std::endian::little,
              "binary CSR I/O assumes a little-endian host");

namespace {

void validate_csr(std::span<const std::uint64_t> offsets, std::span<const NodeId> adjacency) {
  if (offsets.empty() || offsets.front() != 0) {
    throw DomainError("CSR offsets must start with 0");
  }
  const std::uint64_t n = offsets.size() - 1;
  if (offsets.back() != adjacency.size()) {
    throw DomainError("CSR offsets[n] must equal the adjacency length");
  }
  for (std::uint64_t v = 0; v < n; ++v) {
    if (offsets[v] > offsets[v + 1]) throw DomainError("CSR offsets must be non-decreasing");
    for (std::uint64_t i = offsets[v]; i < offsets[v + 1]; ++i) {
      if (adjacency[i] >= n) throw DomainError("CSR adjacency entry out of range");
      if (i > offsets[v] && adjacency[i] <= adjacency[i - 1]) {
        throw DomainError("CSR neighbor slice not strictly increasing");
      }
    }
  }
  // symmetry
  for (std::uint64_t v = 0; v < n; ++v) {
    for (std::uint64_t i = offsets[v]; i < offsets[v + 1]; ++i) {
      const NodeId u = adjacency[i];
      auto first = adjacency.begin() + static_cast<std::ptrdiff_t>(offsets[u]);
      auto last = adjacency.begin() + static_cast<std::ptrdiff_t>(offsets[u + 1]);
      if (!std::binary_search(first, last, v)) throw DomainError("CSR adjacency is not symmetric");
    }
  }
}

std::uint64_t parse_id(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw FormatError("edge list line " + std::to_string(line_no) + ": invalid node id '" +
                      std::string(token) + "'");
  }
  return value;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

}  // namespace

Graph::Graph(std::vector<std::uint64_t> offsets, std::vector<NodeId> adjacency)
    : offsets_(std::move(offsets)), adjacency_(std::move(adjacency)) {
  validate_csr(offsets_, adjacency_);
}

Graph Graph::from_edges(std::uint64_t node_count,
                        std::span<const std::pair<NodeId, NodeId>> edges) {
  // Counting sort by source, then sort + dedup each slice.
  std::vector<std::uint64_t> offsets(node_count + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count) throw DomainError("edge endpoint >= node count");
    ++offsets[u + 1];
    if (u != v) ++offsets[v + 1];
  }
  for (std::uint64_t v = 0; v < node_count; ++v) offsets[v + 1] += offsets[v];

  std::vector<NodeId> adjacency(offsets.back());
  std::vector<std::uint64_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& [u, v] : edges) {
    adjacency[cursor[u]++] = v;
    if (u != v) adjacency[cursor[v]++] = u;
  }

  std::uint64_t write = 0;
  std::uint64_t begin = 0;
  for (std::uint64_t v = 0; v < node_count; ++v) {
    const std::uint64_t end = offsets[v + 1];
    auto first = adjacency.begin() + static_cast<std::ptrdiff_t>(begin);
    auto last = adjacency.begin() + static_cast<std::ptrdiff_t>(end);
    std::sort(first, last);
    last = std::unique(first, last);
    offsets[v] = write;
    for (auto it = first; it != last; ++it) adjacency[write++] = *it;
    begin = end;
  }
  if (node_count > 0) offsets[node_count] = write;
  adjacency.resize(write);
  adjacency.shrink_to_fit();

  Graph g;
  g.offsets_ = std::move(offsets);
  g.adjacency_ = std::move(adjacency);
  return g;
}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  if (v >= node_count()) throw OutOfRangeError("node " + std::to_string(v) + " out of range");
  return std::span<const NodeId>(adjacency_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::uint64_t Graph::degree(NodeId v) const {
  if (v >= node_count()) throw OutOfRangeError("node " + std::to_string(v) + " out of range");
  return offsets_[v + 1] - offsets_[v];
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(adjacency_.size() / 2 + 1);
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u <= v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  if (v >= node_count()) return false;
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph parse_edge_list(std::string_view text, bool /*directed_input*/) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::uint64_t max_id = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    std::size_t i = 0;
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size() || line[i] == '#' || line[i] == '%') continue;

    std::string_view tokens[2];
    int count = 0;
    while (i < line.size()) {
      std::size_t j = i;
      while (j < line.size() && !is_space(line[j])) ++j;
      if (count == 2) {
        throw FormatError("edge list line " + std::to_string(line_no) + ": expected two node ids");
      }
      tokens[count++] = line.substr(i, j - i);
      i = j;
      while (i < line.size() && is_space(line[i])) ++i;
    }
    if (count != 2) {
      throw FormatError("edge list line " + std::to_string(line_no) + ": expected two node ids");
    }
    const NodeId u = parse_id(tokens[0], line_no);
    const NodeId v = parse_id(tokens[1], line_no);
    max_id = std::max({max_id, u, v});
    edges.emplace_back(u, v);
  }
  if (edges.empty()) return Graph();
  return Graph::from_edges(max_id + 1, edges);
}

Graph load_edge_list(const std::filesystem::path& path, bool directed_input) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open edge list " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return parse_edge_list(text, directed_input);
}

void write_binary(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");

  char header[kCsrHeaderBytes] = {};
  std::memcpy(header, kCsrMagic.data(), 4);
  header[4] = static_cast<char>(kCsrVersion);
  const std::uint64_t n = g.node_count();
  const std::uint64_t m2 = g.endpoint_count();
  std::memcpy(header + 8, &n, 8);
  std::memcpy(header + 16, &m2, 8);
  out.write(header, sizeof(header));

  auto write_array = [&out](std::span<const std::uint64_t> values) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size_bytes()));
  };
  write_array(g.offsets());
  write_array(g.adjacency());
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

// --- GraphHandle -----------------------------------------------------------

struct GraphHandle::Backing {
  std::shared_ptr<const Graph> graph;  // in-memory
  void* map = nullptr;                 // file-backed
  std::size_t map_bytes = 0;

  Backing() = default;
  Backing(const Backing&) = delete;
  Backing& operator=(const Backing&) = delete;
  ~Backing() {
    if (map != nullptr) ::munmap(map, map_bytes);
  }
};

struct GraphHandle::Counters {
  std::atomic<std::uint64_t> nodes_touched{0};
  std::atomic<std::uint64_t> slice_reads{0};
  std::atomic<std::uint64_t> degree_reads{0};
  std::atomic<std::uint64_t> bytes_read{0};
  // one bit per node, set on the first slice read
  std::unique_ptr<std::atomic<std::uint64_t>[]> seen;
  std::size_t seen_words = 0;

  void size_for(std::uint64_t n) {
    seen_words = static_cast<std::size_t>((n + 63) / 64);
    seen = std::make_unique<std::atomic<std::uint64_t>[]>(seen_words);
    clear_seen();
  }

  void clear_seen() {
    for (std::size_t i = 0; i < seen_words; ++i) seen[i].store(0, std::memory_order_relaxed);
  }

  void touch(NodeId v) {
    const std::uint64_t bit = std::uint64_t{1} << (v & 63);
    auto& word = seen[v >> 6];
    if (word.load(std::memory_order_relaxed) & bit) return;
    if (!(word.fetch_or(bit, std::memory_order_relaxed) & bit)) {
      nodes_touched.fetch_add(1, std::memory_order_relaxed);
    }
  }
};

GraphHandle::GraphHandle(std::unique_ptr<Backing> backing)
    : backing_(std::move(backing)), counters_(std::make_unique<Counters>()) {}

GraphHandle::GraphHandle(GraphHandle&&) noexcept = default;
GraphHandle& GraphHandle::operator=(GraphHandle&&) noexcept = default;
GraphHandle::~GraphHandle() = default;

GraphHandle GraphHandle::in_memory(Graph g) {
  return in_memory(std::make_shared<const Graph>(std::move(g)));
}

GraphHandle GraphHandle::in_memory(std::shared_ptr<const Graph> g) {
  auto backing = std::make_unique<Backing>();
  backing->graph = std::move(g);
  const Graph& graph = *backing->graph;
  GraphHandle h(std::move(backing));
  h.offsets_ = graph.offsets().data();
  h.adjacency_ = graph.adjacency().data();
  h.node_count_ = graph.node_count();
  h.counters_->size_for(h.node_count_);
  h.endpoint_count_ = graph.endpoint_count();
  return h;
}

bool GraphHandle::file_backed() const { return backing_->map != nullptr; }

void GraphHandle::check_node(NodeId v) const {
  if (v >= node_count_) {
    throw OutOfRangeError("node " + std::to_string(v) + " out of range (n=" +
                          std::to_string(node_count_) + ")");
  }
}

std::span<const NodeId> GraphHandle::neighbors(NodeId v) const {
  check_node(v);
  const std::uint64_t begin = offsets_[v];
  const std::uint64_t end = offsets_[v + 1];
  if (begin > end || end > endpoint_count_) {
    throw FormatError("corrupt offsets for node " + std::to_string(v));
  }
  counters_->slice_reads.fetch_add(1, std::memory_order_relaxed);
  counters_->bytes_read.fetch_add(16 + 8 * (end - begin), std::memory_order_relaxed);
  counters_->touch(v);
  return {adjacency_ + begin, static_cast<std::size_t>(end - begin)};
}

std::uint64_t GraphHandle::degree(NodeId v) const {
  check_node(v);
  const std::uint64_t begin = offsets_[v];
  const std::uint64_t end = offsets_[v + 1];
  if (begin > end || end > endpoint_count_) {
    throw FormatError("corrupt offsets for node " + std::to_string(v));
  }
  counters_->degree_reads.fetch_add(1, std::memory_order_relaxed);
  counters_->bytes_read.fetch_add(16, std::memory_order_relaxed);
  return end - begin;
}

ReadStats GraphHandle::stats() const {
  return {counters_->nodes_touched.load(), counters_->slice_reads.load(),
          counters_->degree_reads.load(), counters_->bytes_read.load()};
}

void GraphHandle::reset_stats() const {
  counters_->clear_seen();
  counters_->nodes_touched = 0;
  counters_->slice_reads = 0;
  counters_->degree_reads = 0;
  counters_->bytes_read = 0;
}

Graph GraphHandle::materialize() const {
  std::vector<std::uint64_t> offsets(offsets_, offsets_ + node_count_ + 1);
  std::vector<NodeId> adjacency(adjacency_, adjacency_ + endpoint_count_);
  return Graph(std::move(offsets), std::move(adjacency));
}

GraphHandle open_binary(const std::filesystem::path& path) {
  const int fd = ::open(path.c_str(), O_RDONLY | O_CLOEXEC);
  if (fd < 0) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));

  struct FdCloser {
    int fd;
    ~FdCloser() { ::close(fd); }
  } closer{fd};

  struct stat st {};
  if (::fstat(fd, &st) != 0) throw IoError("cannot stat " + path.string());
  const auto file_bytes = static_cast<std::uint64_t>(st.st_size);
  if (file_bytes < kCsrHeaderBytes) throw FormatError(path.string() + ": truncated header");

  char header[kCsrHeaderBytes];
  if (::pread(fd, header, sizeof(header), 0) != static_cast<ssize_t>(sizeof(header))) {
    throw IoError("cannot read header of " + path.string());
  }
  if (std::memcmp(header, kCsrMagic.data(), 4) != 0) {
    throw FormatError(path.string() + ": bad magic, not an IECS graph");
  }
  if (static_cast<std::uint8_t>(header[4]) != kCsrVersion) {
    throw FormatError(path.string() + ": unsupported format version " +
                      std::to_string(static_cast<unsigned>(static_cast<std::uint8_t>(header[4]))));
  }
  std::uint64_t n = 0;
  std::uint64_t m2 = 0;
  std::memcpy(&n, header + 8, 8);
  std::memcpy(&m2, header + 16, 8);

  const std::uint64_t max_words = (file_bytes - kCsrHeaderBytes) / 8;
  if (n >= max_words || m2 > max_words - (n + 1) ||
      kCsrHeaderBytes + 8 * (n + 1 + m2) != file_bytes) {
    throw FormatError(path.string() + ": truncated or oversized payload");
  }

  void* map = ::mmap(nullptr, file_bytes, PROT_READ, MAP_PRIVATE, fd, 0);
  if (map == MAP_FAILED) throw IoError("mmap failed for " + path.string());

  auto backing = std::make_unique<GraphHandle::Backing>();
  backing->map = map;
  backing->map_bytes = file_bytes;
  const auto* base = static_cast<const std::uint64_t*>(map);

  GraphHandle h(std::move(backing));
  h.offsets_ = base + kCsrHeaderBytes / 8;
  h.adjacency_ = h.offsets_ + n + 1;
  h.node_count_ = n;
  h.counters_->size_for(n);
  h.endpoint_count_ = m2;
  if (h.offsets_[0] != 0 || h.offsets_[n] != m2) {
    throw FormatError(path.string() + ": offsets inconsistent with header");
  }
  return h;
}

}  // namespace iemb
