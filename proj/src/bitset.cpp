#include "causal_lab/bitset.hpp"

#include <algorithm>

namespace clab {

namespace {

std::size_t tail_mask_bits(std::size_t n) { return n % BitSet::kWordBits; }

}  // namespace

BitSet::BitSet(std::size_t n, std::initializer_list<std::size_t> ids) : BitSet(n) {
  for (std::size_t id : ids) set(id);
}

BitSet BitSet::full(std::size_t n) {
  BitSet s(n);
  std::fill(s.words_.begin(), s.words_.end(), ~Word{0});
  if (const std::size_t r = tail_mask_bits(n); r != 0 && !s.words_.empty()) {
    s.words_.back() &= (Word{1} << r) - 1;
  }
  return s;
}

BitSet BitSet::from_ids(std::size_t n, std::span<const std::size_t> ids) {
  BitSet s(n);
  for (std::size_t id : ids) s.set(id);
  return s;
}

void BitSet::clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

std::size_t BitSet::count() const noexcept {
  std::size_t c = 0;
  for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitSet::any() const noexcept {
  return std::any_of(words_.begin(), words_.end(), [](Word w) { return w != 0; });
}

BitSet& BitSet::operator|=(const BitSet& o) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

BitSet& BitSet::operator&=(const BitSet& o) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

BitSet& BitSet::operator^=(const BitSet& o) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  return *this;
}

BitSet& BitSet::subtract(const BitSet& o) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

BitSet BitSet::complement() const { return full(size_) - *this; }

bool BitSet::is_subset_of(const BitSet& o) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~o.words_[i]) != 0) return false;
  }
  return true;
}

bool BitSet::intersects(const BitSet& o) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & o.words_[i]) != 0) return true;
  }
  return false;
}

bool BitSet::dot(const BitSet& o) const noexcept {
  Word acc = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & o.words_[i];
  return (std::popcount(acc) & 1) != 0;
}

std::size_t BitSet::first() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return size_;
}

std::size_t BitSet::next(std::size_t i) const noexcept {
  std::size_t j = i + 1;
  if (j >= size_) return size_;
  std::size_t w = j / kWordBits;
  Word bits = words_[w] & (~Word{0} << (j % kWordBits));
  while (true) {
    if (bits != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
    if (++w >= words_.size()) return size_;
    bits = words_[w];
  }
}

std::vector<std::size_t> BitSet::to_vector() const {
  std::vector<std::size_t> out;
  out.reserve(count());
  for_each([&](std::size_t i) { out.push_back(i); });
  return out;
}

std::strong_ordering operator<=>(const BitSet& a, const BitSet& b) noexcept {
  if (auto c = a.size_ <=> b.size_; c != 0) return c;
  for (std::size_t w = 0; w < a.words_.size(); ++w) {
    const BitSet::Word diff = a.words_[w] ^ b.words_[w];
    if (diff == 0) continue;
    const std::size_t bit = w * BitSet::kWordBits + static_cast<std::size_t>(std::countr_zero(diff));
    const bool a_holds = a.test(bit);
    const BitSet& other = a_holds ? b : a;
    // Sorted-id lexicographic order: the holder of the first differing id wins
    // unless the other set has no ids left past it (then it is a prefix).
    const bool other_continues = other.next(bit) < other.size();
    const bool a_first = a_holds ? other_continues : !other_continues;
    return a_first ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::size_t BitSetHash::operator()(const BitSet& s) const noexcept {
  std::size_t h = s.size() * 0x9e3779b97f4a7c15ULL;
  for (BitSet::Word w : s.words()) {
    h ^= static_cast<std::size_t>(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

BitMatrix BitMatrix::transpose() const {
  const std::size_t n = size();
  BitMatrix t(n);
  for (std::size_t i = 0; i < n; ++i) {
    rows_[i].for_each([&](std::size_t j) { t.set(j, i); });
  }
  return t;
}

BitMatrix BitMatrix::induced(std::span<const std::size_t> ids) const {
  BitMatrix m(ids.size());
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = 0; b < ids.size(); ++b) {
      if (test(ids[a], ids[b])) m.set(a, b);
    }
  }
  return m;
}

std::size_t BitMatrix::count() const noexcept {
  std::size_t c = 0;
  for (const auto& r : rows_) c += r.count();
  return c;
}

}  // namespace clab
