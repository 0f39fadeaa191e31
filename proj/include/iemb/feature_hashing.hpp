#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "iemb/graph_store.hpp"

namespace iemb {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// splitmix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

/// Keys of the bucket hash and the sign hash, expanded from one master seed.
/// Constant-size state: the whole mapping k -> (bucket, sign) is a pure
/// function of (master_seed, dim).
class HashSeeds {
 public:
  HashSeeds(std::uint64_t master_seed, std::uint64_t dim);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t seed_dim() const { return seed_dim_; }
  std::uint64_t seed_sign() const { return seed_sign_; }
  std::uint64_t dim() const { return dim_; }

  friend bool operator==(const HashSeeds&, const HashSeeds&) = default;

 private:
  std::uint64_t master_seed_;
  std::uint64_t seed_dim_;
  std::uint64_t seed_sign_;
  std::uint64_t dim_;
};

/// Bucket in [0, dim): high word of mix64(k ^ seed_dim) * dim.
inline std::uint64_t hash_dim(std::uint64_t key, const HashSeeds& seeds) {
  const std::uint64_t z = mix64(key ^ seeds.seed_dim());
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(z) * seeds.dim()) >> 64);
}

/// +1 when bit 63 of mix64(k ^ seed_sign) is clear, -1 otherwise.
inline int hash_sign(std::uint64_t key, const HashSeeds& seeds) {
  return (mix64(key ^ seeds.seed_sign()) >> 63) == 0 ? 1 : -1;
}

struct SparseEntry {
  std::uint64_t key;
  double value;
};

/// Hash-kernel projection: out[i] = sum over keys with hash_dim(k) == i of
/// value * hash_sign(k). Entries are accumulated in ascending key order
/// regardless of input order.
std::vector<double> project(std::span<const SparseEntry> x, const HashSeeds& seeds);

/// Same as project() but adds into `out` (size dim); `x` must already be
/// sorted by key.
void project_sorted_into(std::span<const SparseEntry> x, const HashSeeds& seeds,
                         std::span<double> out);

}  // namespace iemb
