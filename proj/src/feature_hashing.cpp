#include "iemb/feature_hashing.hpp"

#include <algorithm>

#include "iemb/errors.hpp"

namespace iemb {

HashSeeds::HashSeeds(std::uint64_t master_seed, std::uint64_t dim)
    : master_seed_(master_seed),
      seed_dim_(mix64(master_seed)),
      seed_sign_(mix64(master_seed + kGoldenGamma)),
      dim_(dim) {
  if (dim == 0) throw DomainError("embedding dimension must be >= 1");
}

void project_sorted_into(std::span<const SparseEntry> x, const HashSeeds& seeds,
                         std::span<double> out) {
  if (out.size() != seeds.dim()) throw DomainError("projection output size != dim");
  for (const auto& [key, value] : x) {
    out[hash_dim(key, seeds)] += static_cast<double>(hash_sign(key, seeds)) * value;
  }
}

std::vector<double> project(std::span<const SparseEntry> x, const HashSeeds& seeds) {
  std::vector<SparseEntry> sorted(x.begin(), x.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const SparseEntry& a, const SparseEntry& b) { return a.key < b.key; });
  std::vector<double> out(seeds.dim(), 0.0);
  project_sorted_into(sorted, seeds, out);
  return out;
}

}  // namespace iemb
