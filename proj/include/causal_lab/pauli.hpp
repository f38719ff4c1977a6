#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "causal_lab/bitset.hpp"

namespace clab::duality {

/// A Pauli string on n sites as a GF(2) vector (x | z) of length 2n: site i
/// carries X if bit i is set, Z if bit n+i is set, Y if both. Phases are
/// dropped; only spans matter.
struct PauliString {
  BitSet bits;

  static PauliString identity(std::size_t n) { return {BitSet(2 * n)}; }
  static PauliString x_at(std::size_t n, std::size_t site);
  static PauliString z_at(std::size_t n, std::size_t site);

  std::size_t sites() const noexcept { return bits.size() / 2; }
  BitSet support() const;
  bool is_identity() const noexcept { return bits.none(); }
  /// Compact label, e.g. "X0 Z3 Y5" ("I" for the identity).
  std::string label() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
};

/// Symplectic product: 0 iff the two strings commute.
bool symplectic_product(const BitSet& a, const BitSet& b);
inline bool commute(const PauliString& a, const PauliString& b) { return !symplectic_product(a.bits, b.bits); }

/// A Pauli-closed matrix algebra, stored as the GF(2) span of its strings in
/// reduced row echelon form (pivot = lowest set bit, rows by ascending
/// pivot). Two algebras are equal iff their bases are equal.
class AlgebraBasis {
 public:
  AlgebraBasis() = default;
  explicit AlgebraBasis(std::size_t n) : n_(n) {}

  static AlgebraBasis span(std::size_t n, const std::vector<BitSet>& generators);
  static AlgebraBasis identity_only(std::size_t n) { return AlgebraBasis(n); }
  static AlgebraBasis everything(std::size_t n);

  std::size_t sites() const noexcept { return n_; }
  std::size_t dim_log() const noexcept { return rows_.size(); }
  const std::vector<BitSet>& rows() const noexcept { return rows_; }

  bool contains(const BitSet& v) const;
  bool contains(const AlgebraBasis& other) const;

  friend bool operator==(const AlgebraBasis&, const AlgebraBasis&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<BitSet> rows_;
};

/// Reduced row echelon basis of the span of `rows` (all of width w).
std::vector<BitSet> row_reduce(std::vector<BitSet> rows);
/// Basis of {v : r . v = 0 for every row r}, width w.
std::vector<BitSet> nullspace(const std::vector<BitSet>& rows, std::size_t width);

/// Strings supported inside the site set.
AlgebraBasis algebra_of_sites(std::size_t n, const BitSet& sites);

/// Strings commuting with every string of a.
AlgebraBasis commutant(const AlgebraBasis& a);
/// Span of the union.
AlgebraBasis sum(const AlgebraBasis& a, const AlgebraBasis& b);
/// Subspace intersection (Zassenhaus). Throws DimensionMismatch.
AlgebraBasis intersect(const AlgebraBasis& a, const AlgebraBasis& b);

/// Hex encoding of a (x | z) row: character k holds bits 4k..4k+3, with
/// bit 4k as the least significant.
std::string to_hex(const BitSet& row);
BitSet from_hex(const std::string& hex, std::size_t width);

}  // namespace clab::duality
