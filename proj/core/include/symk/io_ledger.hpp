#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace symk {

/// Tag identifying which logical matrix an element belongs to.
using MatrixId = std::uint8_t;
inline constexpr MatrixId matrix_a = 0;  // the streamed operand (A)
inline constexpr MatrixId matrix_c = 1;  // the symmetric result (C)
inline constexpr std::size_t max_matrices = 4;

/// Address of one scalar element: (matrix tag, offset in its storage).
struct ElementAddr {
  MatrixId matrix = 0;
  std::uint64_t offset = 0;
  friend bool operator==(const ElementAddr&, const ElementAddr&) = default;
};

/// A load would exceed the fast-memory capacity. Schedules control eviction
/// explicitly, so this always indicates a scheduling bug, never a policy
/// event; the run is aborted.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evicting or using an element that is not resident.
class ResidencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Monotone transfer counters of one run, and the residency high-water mark.
struct IoReport {
  std::uint64_t loads = 0;
  std::uint64_t stores = 0;
  std::uint64_t peak_resident = 0;
  std::array<std::uint64_t, max_matrices> per_matrix_loads{};

  std::uint64_t loads_a() const { return per_matrix_loads[matrix_a]; }
  std::uint64_t loads_c() const { return per_matrix_loads[matrix_c]; }

  static std::string csv_header();
  /// One CSV row: algo,N,M,S,loads_A,loads_C,stores,peak_resident
  std::string csv_row(std::string_view algo, std::size_t n, std::size_t m,
                      std::size_t s) const;

  friend bool operator==(const IoReport&, const IoReport&) = default;
};

/// Counter difference end - start; peak_resident is taken from `end`
/// (the ledger's peak is global over its lifetime).
IoReport delta(const IoReport& end, const IoReport& start);

namespace detail {

// Fixed-size open-addressing set of u64 keys with linear probing and
// backward-shift deletion. Sized at 4x the ledger capacity so the load
// factor stays below 1/4; the ledger guarantees size never exceeds capacity.
class ResidentSet {
 public:
  explicit ResidentSet(std::uint64_t max_elements) {
    std::size_t buckets = 16;
    while (buckets < 4 * (max_elements + 1)) buckets <<= 1;
    slots_.assign(buckets, kEmpty);
    mask_ = buckets - 1;
  }

  std::size_t size() const { return size_; }

  bool contains(std::uint64_t key) const {
    for (std::size_t i = ideal(key);; i = (i + 1) & mask_) {
      if (slots_[i] == key) return true;
      if (slots_[i] == kEmpty) return false;
    }
  }

  // Returns true if the key was newly inserted.
  bool insert(std::uint64_t key) {
    std::size_t i = ideal(key);
    while (slots_[i] != kEmpty) {
      if (slots_[i] == key) return false;
      i = (i + 1) & mask_;
    }
    slots_[i] = key;
    ++size_;
    return true;
  }

  // Returns true if the key was present.
  bool erase(std::uint64_t key) {
    std::size_t i = ideal(key);
    while (slots_[i] != key) {
      if (slots_[i] == kEmpty) return false;
      i = (i + 1) & mask_;
    }
    --size_;
    // Backward-shift deletion keeps every probe chain contiguous.
    std::size_t j = i;
    for (;;) {
      slots_[i] = kEmpty;
      for (;;) {
        j = (j + 1) & mask_;
        if (slots_[j] == kEmpty) return true;
        const std::size_t h = ideal(slots_[j]);
        // The entry at j may fill the hole at i only if its ideal slot h
        // does not lie cyclically in (i, j].
        if (((j - h) & mask_) >= ((j - i) & mask_)) break;
      }
      slots_[i] = slots_[j];
      i = j;
    }
  }

 private:
  static constexpr std::uint64_t kEmpty = ~0ULL;

  std::size_t ideal(std::uint64_t key) const {
    std::uint64_t z = key + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return static_cast<std::size_t>(z ^ (z >> 31)) & mask_;
  }

  std::vector<std::uint64_t> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace detail

/// The two-level memory simulator. A fast memory of `capacity` scalar
/// elements; every kernel operand must be loaded before use and evicted
/// explicitly. The ledger never auto-evicts: exceeding capacity is a hard
/// error. One ledger is owned by exactly one running schedule.
class IoLedger {
 public:
  explicit IoLedger(std::uint64_t capacity)
      : capacity_(capacity), resident_(capacity) {
    if (capacity == 0)
      throw std::invalid_argument("IoLedger: capacity must be positive");
  }

  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t resident_count() const { return resident_.size(); }

  bool resident(ElementAddr a) const { return resident_.contains(key(a)); }

  /// Bring one element into fast memory. A touch of an already-resident
  /// element is free; otherwise counts one load. Throws CapacityError if
  /// the fast memory is full.
  void load(ElementAddr a) {
    if (!resident_.insert(key(a))) return;
    if (resident_.size() > capacity_) {
      resident_.erase(key(a));
      throw CapacityError(
          "load would exceed fast-memory capacity S=" +
          std::to_string(capacity_) + " (matrix " + std::to_string(a.matrix) +
          ", offset " + std::to_string(a.offset) + ")");
    }
    ++loads_;
    ++per_matrix_loads_[a.matrix];
    if (resident_.size() > peak_) peak_ = resident_.size();
  }

  /// Remove a resident element; a dirty eviction counts one store.
  void evict(ElementAddr a, bool dirty) {
    if (!resident_.erase(key(a)))
      throw ResidencyError("evict of non-resident element (matrix " +
                           std::to_string(a.matrix) + ", offset " +
                           std::to_string(a.offset) + ")");
    if (dirty) ++stores_;
  }

  /// Assert that all operands are in fast memory; kernels call this before
  /// every arithmetic operation in compute mode. Throws ResidencyError
  /// naming the first missing address.
  void require_resident(std::span<const ElementAddr> addrs) const;
  void require_resident(std::initializer_list<ElementAddr> addrs) const {
    require_resident(std::span<const ElementAddr>(addrs.begin(), addrs.size()));
  }

  IoReport snapshot() const {
    return IoReport{loads_, stores_, peak_, per_matrix_loads_};
  }

 private:
  static std::uint64_t key(ElementAddr a) {
    if (a.matrix >= max_matrices || (a.offset >> 56) != 0)
      throw std::invalid_argument("element address out of range");
    return (static_cast<std::uint64_t>(a.matrix) << 56) | a.offset;
  }

  std::uint64_t capacity_;
  detail::ResidentSet resident_;
  std::uint64_t loads_ = 0;
  std::uint64_t stores_ = 0;
  std::uint64_t peak_ = 0;
  std::array<std::uint64_t, max_matrices> per_matrix_loads_{};
};

}  // namespace symk
