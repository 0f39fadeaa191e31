#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "iemb/embedder.hpp"

namespace iemb {

inline constexpr int kEmbeddingFormatVersion = 1;
/// Binary files start with the text header line, NUL-padded to this size.
inline constexpr std::size_t kBinaryPreambleBytes = 256;

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

/// "#IE v1 n=<n> d=<d> alpha=<a> epsilon=<e> seed=<s> log=nat"
std::string embedding_header(std::uint64_t graph_nodes, const EmbeddingMatrix& m);

/// Header line, then "<node_id> <v_0> ... <v_{d-1}>" per row.
void write_embeddings_text(std::ostream& out, std::uint64_t graph_nodes, const EmbeddingMatrix& m,
                           std::span<const NodeId> node_ids);

/// Fixed 256-byte preamble holding the header line, then rows x dim
/// little-endian doubles. Only whole-graph matrices are written this way.
void write_embeddings_binary(std::ostream& out, std::uint64_t graph_nodes,
                             const EmbeddingMatrix& m);

struct LoadedEmbeddings {
  std::uint64_t graph_nodes = 0;
  std::vector<NodeId> node_ids;
  EmbeddingMatrix matrix;
};

LoadedEmbeddings read_embeddings_text(std::istream& in);
LoadedEmbeddings read_embeddings_binary(std::istream& in);

}  // namespace iemb
