#include "causal_lab/pauli.hpp"

#include <algorithm>

#include "causal_lab/errors.hpp"

namespace clab::duality {

PauliString PauliString::x_at(std::size_t n, std::size_t site) {
  PauliString s = identity(n);
  s.bits.set(site);
  return s;
}

PauliString PauliString::z_at(std::size_t n, std::size_t site) {
  PauliString s = identity(n);
  s.bits.set(n + site);
  return s;
}

BitSet PauliString::support() const {
  const std::size_t n = sites();
  BitSet out(n);
  bits.for_each([&](std::size_t i) { out.set(i < n ? i : i - n); });
  return out;
}

std::string PauliString::label() const {
  const std::size_t n = sites();
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool x = bits.test(i);
    const bool z = bits.test(n + i);
    if (!x && !z) continue;
    if (!out.empty()) out += ' ';
    out += x && z ? 'Y' : (x ? 'X' : 'Z');
    out += std::to_string(i);
  }
  return out.empty() ? "I" : out;
}

bool symplectic_product(const BitSet& a, const BitSet& b) {
  const std::size_t n = a.size() / 2;
  // a_x . b_z + a_z . b_x over GF(2).
  bool acc = false;
  for (std::size_t i = 0; i < n; ++i) {
    acc ^= (a.test(i) && b.test(n + i)) != (a.test(n + i) && b.test(i));
  }
  return acc;
}

// ---------------------------------------------------------------------------

std::vector<BitSet> row_reduce(std::vector<BitSet> rows) {
  std::vector<BitSet> basis;
  std::vector<std::size_t> pivots;
  for (BitSet& r : rows) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (r.test(pivots[k])) r ^= basis[k];
    }
    if (r.none()) continue;
    const std::size_t piv = r.first();
    for (BitSet& b : basis) {
      if (b.test(piv)) b ^= r;
    }
    basis.push_back(std::move(r));
    pivots.push_back(piv);
  }
  std::vector<std::size_t> order(basis.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots[a] < pivots[b]; });
  std::vector<BitSet> out;
  out.reserve(basis.size());
  for (std::size_t k : order) out.push_back(std::move(basis[k]));
  return out;
}

std::vector<BitSet> nullspace(const std::vector<BitSet>& rows, std::size_t width) {
  const std::vector<BitSet> r = row_reduce(rows);
  BitSet is_pivot(width);
  std::vector<std::size_t> pivots;
  for (const BitSet& row : r) {
    pivots.push_back(row.first());
    is_pivot.set(pivots.back());
  }
  std::vector<BitSet> out;
  for (std::size_t f = 0; f < width; ++f) {
    if (is_pivot.test(f)) continue;
    BitSet v(width);
    v.set(f);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r[k].test(f)) v.set(pivots[k]);
    }
    out.push_back(std::move(v));
  }
  return out;
}

AlgebraBasis AlgebraBasis::span(std::size_t n, const std::vector<BitSet>& generators) {
  for (const BitSet& g : generators) {
    if (g.size() != 2 * n) fail(ErrorCode::DimensionMismatch, "generator width does not match 2n");
  }
  AlgebraBasis a(n);
  a.rows_ = row_reduce(generators);
  return a;
}

AlgebraBasis AlgebraBasis::everything(std::size_t n) { return algebra_of_sites(n, BitSet::full(n)); }

bool AlgebraBasis::contains(const BitSet& v) const {
  if (v.size() != 2 * n_) fail(ErrorCode::DimensionMismatch, "string width does not match 2n");
  BitSet r = v;
  for (const BitSet& b : rows_) {
    if (r.test(b.first())) r ^= b;
  }
  return r.none();
}

bool AlgebraBasis::contains(const AlgebraBasis& other) const {
  return std::all_of(other.rows_.begin(), other.rows_.end(), [&](const BitSet& v) { return contains(v); });
}

AlgebraBasis algebra_of_sites(std::size_t n, const BitSet& sites) {
  if (sites.size() != n) fail(ErrorCode::DimensionMismatch, "site set does not match n");
  std::vector<BitSet> gens;
  sites.for_each([&](std::size_t i) { gens.push_back(PauliString::x_at(n, i).bits); });
  sites.for_each([&](std::size_t i) { gens.push_back(PauliString::z_at(n, i).bits); });
  return AlgebraBasis::span(n, gens);
}

namespace {

BitSet swap_halves(const BitSet& v, std::size_t n) {
  BitSet out(2 * n);
  v.for_each([&](std::size_t i) { out.set(i < n ? i + n : i - n); });
  return out;
}

}  // namespace

AlgebraBasis commutant(const AlgebraBasis& a) {
  const std::size_t n = a.sites();
  // <v, r>_symp = swap(r) . v
  std::vector<BitSet> swapped;
  swapped.reserve(a.rows().size());
  for (const BitSet& r : a.rows()) swapped.push_back(swap_halves(r, n));
  return AlgebraBasis::span(n, nullspace(swapped, 2 * n));
}

AlgebraBasis sum(const AlgebraBasis& a, const AlgebraBasis& b) {
  if (a.sites() != b.sites()) fail(ErrorCode::DimensionMismatch, "algebras live on different site counts");
  std::vector<BitSet> rows = a.rows();
  rows.insert(rows.end(), b.rows().begin(), b.rows().end());
  return AlgebraBasis::span(a.sites(), rows);
}

AlgebraBasis intersect(const AlgebraBasis& a, const AlgebraBasis& b) {
  if (a.sites() != b.sites()) fail(ErrorCode::DimensionMismatch, "algebras live on different site counts");
  const std::size_t n = a.sites();
  const std::size_t w = 2 * n;
  // Rows [u | u] and [v | 0]; after reduction the rows with an empty left
  // half carry a basis of the intersection in their right half.
  std::vector<BitSet> rows;
  for (const BitSet& u : a.rows()) {
    BitSet r(2 * w);
    u.for_each([&](std::size_t i) {
      r.set(i);
      r.set(w + i);
    });
    rows.push_back(std::move(r));
  }
  for (const BitSet& v : b.rows()) {
    BitSet r(2 * w);
    v.for_each([&](std::size_t i) { r.set(i); });
    rows.push_back(std::move(r));
  }
  std::vector<BitSet> meet;
  for (const BitSet& r : row_reduce(std::move(rows))) {
    if (r.first() < w) continue;
    BitSet v(w);
    r.for_each([&](std::size_t i) { v.set(i - w); });
    meet.push_back(std::move(v));
  }
  return AlgebraBasis::span(n, meet);
}

// ---------------------------------------------------------------------------

std::string to_hex(const BitSet& row) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out((row.size() + 3) / 4, '0');
  row.for_each([&](std::size_t i) {
    char& c = out[i / 4];
    const int v = static_cast<int>(std::string_view(kDigits).find(c)) | (1 << (i % 4));
    c = kDigits[v];
  });
  return out;
}

BitSet from_hex(const std::string& hex, std::size_t width) {
  if (hex.size() != (width + 3) / 4) fail(ErrorCode::ParseError, "hex row has the wrong length");
  BitSet out(width);
  for (std::size_t k = 0; k < hex.size(); ++k) {
    const char c = hex[k];
    int v = 0;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      v = c - 'A' + 10;
    } else {
      fail(ErrorCode::ParseError, "invalid hex digit");
    }
    for (int b = 0; b < 4; ++b) {
      if (!((v >> b) & 1)) continue;
      const std::size_t i = 4 * k + static_cast<std::size_t>(b);
      if (i >= width) fail(ErrorCode::ParseError, "hex row sets bits past its width");
      out.set(i);
    }
  }
  return out;
}

}  // namespace clab::duality
