#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace clab {

/// Fixed-width dynamic bit vector. Used both as a point set over a causal set
/// and as a GF(2) row vector in the Pauli algebra engine.
class BitSet {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitSet() = default;
  explicit BitSet(std::size_t n) : size_(n), words_((n + kWordBits - 1) / kWordBits, 0) {}
  BitSet(std::size_t n, std::initializer_list<std::size_t> ids);

  static BitSet full(std::size_t n);
  static BitSet from_ids(std::size_t n, std::span<const std::size_t> ids);

  std::size_t size() const noexcept { return size_; }
  std::span<const Word> words() const noexcept { return words_; }
  std::span<Word> words() noexcept { return words_; }

  bool test(std::size_t i) const noexcept {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }
  void set(std::size_t i) noexcept { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void set(std::size_t i, bool value) noexcept {
    if (value) {
      set(i);
    } else {
      reset(i);
    }
  }
  void reset(std::size_t i) noexcept { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }
  void flip(std::size_t i) noexcept { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }
  void clear() noexcept;

  std::size_t count() const noexcept;
  bool any() const noexcept;
  bool none() const noexcept { return !any(); }

  BitSet& operator|=(const BitSet& o) noexcept;
  BitSet& operator&=(const BitSet& o) noexcept;
  BitSet& operator^=(const BitSet& o) noexcept;
  /// this &= ~o
  BitSet& subtract(const BitSet& o) noexcept;

  friend BitSet operator|(BitSet a, const BitSet& b) { return a |= b; }
  friend BitSet operator&(BitSet a, const BitSet& b) { return a &= b; }
  friend BitSet operator^(BitSet a, const BitSet& b) { return a ^= b; }
  friend BitSet operator-(BitSet a, const BitSet& b) { return a.subtract(b); }
  BitSet complement() const;

  bool is_subset_of(const BitSet& o) const noexcept;
  bool intersects(const BitSet& o) const noexcept;
  /// Parity of the popcount of (this & o); the GF(2) dot product.
  bool dot(const BitSet& o) const noexcept;

  /// Index of the lowest set bit, or size() if empty.
  std::size_t first() const noexcept;
  /// Index of the lowest set bit strictly above i, or size() if none.
  std::size_t next(std::size_t i) const noexcept;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        const int tz = std::countr_zero(bits);
        f(w * kWordBits + static_cast<std::size_t>(tz));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::size_t> to_vector() const;

  friend bool operator==(const BitSet&, const BitSet&) = default;
  /// Total order: by size, then lexicographic on ascending member ids
  /// (the set whose smallest differing id is present sorts first).
  friend std::strong_ordering operator<=>(const BitSet& a, const BitSet& b) noexcept;

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

struct BitSetHash {
  std::size_t operator()(const BitSet& s) const noexcept;
};

/// Square boolean matrix stored as one BitSet per row.
class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : rows_(n, BitSet(n)) {}

  std::size_t size() const noexcept { return rows_.size(); }
  bool test(std::size_t i, std::size_t j) const noexcept { return rows_[i].test(j); }
  void set(std::size_t i, std::size_t j) noexcept { rows_[i].set(j); }
  void reset(std::size_t i, std::size_t j) noexcept { rows_[i].reset(j); }

  const BitSet& row(std::size_t i) const noexcept { return rows_[i]; }
  BitSet& row(std::size_t i) noexcept { return rows_[i]; }

  BitMatrix transpose() const;
  /// Submatrix on the given (ascending) index list.
  BitMatrix induced(std::span<const std::size_t> ids) const;
  std::size_t count() const noexcept;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::vector<BitSet> rows_;
};

}  // namespace clab
