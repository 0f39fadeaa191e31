#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <new>

namespace iemb {

struct AllocationTally {
  std::uint64_t current = 0;
  std::uint64_t peak = 0;
};

/// Allocator that records live and peak bytes in a caller-owned tally.
/// Not thread-safe; each tally belongs to one computation.
template <class T>
class CountingAllocator {
 public:
  using value_type = T;

  explicit CountingAllocator(AllocationTally* tally) noexcept : tally_(tally) {}
  template <class U>
  CountingAllocator(const CountingAllocator<U>& other) noexcept : tally_(other.tally()) {}

  T* allocate(std::size_t count) {
    T* p = std::allocator<T>{}.allocate(count);
    tally_->current += count * sizeof(T);
    if (tally_->current > tally_->peak) tally_->peak = tally_->current;
    return p;
  }

  void deallocate(T* p, std::size_t count) noexcept {
    std::allocator<T>{}.deallocate(p, count);
    tally_->current -= count * sizeof(T);
  }

  AllocationTally* tally() const noexcept { return tally_; }

  template <class U>
  bool operator==(const CountingAllocator<U>& other) const noexcept {
    return tally_ == other.tally();
  }

 private:
  AllocationTally* tally_;
};

}  // namespace iemb
