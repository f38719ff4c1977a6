#include <doctest.h>

#include <random>

#include "causal_lab/duality.hpp"
#include "causal_lab/errors.hpp"
#include "causal_lab/families.hpp"
#include "oracles/dense_pauli.hpp"

using namespace clab;
using namespace clab::duality;
using causet::Causet;
using causet::PointSet;

namespace {

Causet from_pairs(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
  BitMatrix raw(n);
  for (auto [i, j] : pairs) raw.set(i, j);
  return Causet::from_relation(raw);
}

Causet diamond_poset() { return from_pairs(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }
Causet antichain(std::size_t n) { return from_pairs(n, {}); }

PointSet ids(std::size_t n, std::initializer_list<std::size_t> v) { return PointSet(n, v); }

PointSet subset(std::size_t n, std::uint64_t mask) {
  PointSet s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if ((mask >> i) & 1u) s.set(i);
  }
  return s;
}

AlgebraBasis random_span(std::size_t n, std::mt19937_64& rng) {
  std::vector<BitSet> gens;
  const std::size_t count = rng() % (2 * n + 1);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t g = 0; g < count; ++g) {
    BitSet v(2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i) v.set(i, coin(rng));
    gens.push_back(std::move(v));
  }
  return AlgebraBasis::span(n, gens);
}

// Symplectic commutant against the dense-matrix nullspace: equal dimension
// (2^dim_log operators) and every basis string commutes with the generators.
void check_against_dense(std::size_t n, const PointSet& region) {
  const AlgebraBasis comm = commutant(algebra_of_sites(n, region));
  const auto gens = oracle::site_generators(n, region);
  const std::size_t dim = std::size_t{1} << n;
  CHECK(oracle::commutant_dimension(gens, dim) == (std::size_t{1} << comm.dim_log()));
  for (const BitSet& row : comm.rows()) {
    const auto m = oracle::pauli_matrix(n, row);
    for (const auto& g : gens) CHECK(oracle::commutes(m, g));
  }
}

}  // namespace

TEST_CASE("Pauli strings") {
  const auto x = PauliString::x_at(3, 1);
  const auto z = PauliString::z_at(3, 1);
  CHECK(x.label() == "X1");
  CHECK_FALSE(commute(x, z));
  CHECK(commute(x, PauliString::z_at(3, 2)));
  CHECK(PauliString::identity(3).label() == "I");
  BitSet y = x.bits | z.bits;
  CHECK(PauliString{y}.label() == "Y1");
  CHECK(from_hex(to_hex(y), 6) == y);
}

TEST_CASE("algebras of regions") {
  const auto a = algebra_of_sites(2, ids(2, {0}));
  CHECK(a.dim_log() == 2);
  CHECK(a.contains(PauliString::x_at(2, 0).bits));
  CHECK(algebra_of_sites(2, PointSet(2)).dim_log() == 0);
  CHECK(algebra_of_sites(3, ids(3, {0, 2})).dim_log() == 4);
}

TEST_CASE("commutant examples") {
  CHECK(commutant(algebra_of_sites(2, ids(2, {0}))) == algebra_of_sites(2, ids(2, {1})));
  CHECK(commutant(AlgebraBasis::identity_only(3)) == AlgebraBasis::everything(3));
  CHECK(commutant(AlgebraBasis::everything(3)) == AlgebraBasis::identity_only(3));
}

TEST_CASE("intersection examples") {
  const auto a = algebra_of_sites(3, ids(3, {0, 1}));
  const auto b = algebra_of_sites(3, ids(3, {1, 2}));
  CHECK(intersect(a, b) == algebra_of_sites(3, ids(3, {1})));
  CHECK(intersect(a, a) == a);
  CHECK(intersect(a, AlgebraBasis::identity_only(3)) == AlgebraBasis::identity_only(3));
  CHECK_THROWS_AS(intersect(a, AlgebraBasis::identity_only(4)), LabError);
}

TEST_CASE("symplectic commutant matches the dense oracle on every region up to 4 sites") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) check_against_dense(n, subset(n, mask));
  }
}

TEST_CASE("symplectic commutant matches the dense oracle on random 5-site regions") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 20; ++k) check_against_dense(5, subset(5, rng() % 32));
}

TEST_CASE("involution, dimension duality and antitony") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 1 + rng() % 24;
    const auto a = random_span(n, rng);
    const auto ac = commutant(a);
    CHECK(a.dim_log() + ac.dim_log() == 2 * n);
    CHECK(commutant(ac) == a);
    const auto b = sum(a, random_span(n, rng));
    CHECK(b.contains(a));
    CHECK(ac.contains(commutant(b)));
  }
}

TEST_CASE("net axioms on small causets") {
  const Causet d = diamond_poset();
  CHECK(check_net_axioms(d, causet::convex_region_family(d).regions));
  const Causet c = causet::sprinkle(continuum::SpacetimeModel::minkowski(1, continuum::Window::unit_box(1)), 10, 4);
  CHECK(check_net_axioms(c, causet::convex_region_family(c).regions));
}

TEST_CASE("Haag duality examples") {
  const Causet two = antichain(2);
  const std::vector<PointSet> singles{ids(2, {0}), ids(2, {1})};
  const auto ok = haag_duality_check(two, ids(2, {0}), singles);
  CHECK(ok.holds);
  CHECK(ok.rhs == algebra_of_sites(2, ids(2, {0})));
  CHECK(covering_oracle(two, ids(2, {0}), singles));

  const Causet d = diamond_poset();
  const auto diamonds = causet::spans_of(causet::diamonds_on_slice(d, causet::make_slice(d, ids(4, {1, 2}))));
  const auto bad = haag_duality_check(d, ids(4, {1}), diamonds);
  CHECK_FALSE(bad.holds);
  CHECK(bad.rhs == algebra_of_sites(4, ids(4, {0, 1, 3})));
  REQUIRE_FALSE(bad.witnesses.empty());
  for (const auto& w : bad.witnesses) CHECK(w.support().is_subset_of(ids(4, {0, 3})));
  CHECK_FALSE(covering_oracle(d, ids(4, {1}), diamonds));

  const auto all = haag_duality_check(d, d.all(), diamonds);
  CHECK(all.holds);
  CHECK(all.empty_family);
  CHECK_FALSE(covering_oracle(d, ids(4, {1}), {}));
  CHECK(covering_oracle(d, d.all(), {}));
}

TEST_CASE("Haag duality agrees with the covering oracle on small causets") {
  std::mt19937_64 rng(41);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Causet c = causet::sprinkle(continuum::SpacetimeModel::minkowski(1, continuum::Window::unit_box(1)), 8.0, seed);
    if (c.empty() || c.size() > 10) continue;
    const auto fam = causet::convex_region_family(c).regions;
    for (const PointSet& d1 : fam) CHECK(haag_duality_check(c, d1, fam).holds == covering_oracle(c, d1, fam));
  }
}

TEST_CASE("punctured Haag duality on three incomparable points") {
  const Causet c = antichain(3);
  const std::vector<PointSet> fam{ids(3, {0}), ids(3, {1}), ids(3, {2})};
  const auto ambient = punctured_hd_check(c, ids(3, {0}), 2, fam, PuncturedMode::Ambient);
  CHECK_FALSE(ambient.holds);
  CHECK(ambient.witness_in_shadow);
  const auto excised = punctured_hd_check(c, ids(3, {0}), 2, fam, PuncturedMode::Excised);
  CHECK(excised.holds);
  try {
    (void)punctured_hd_check(c, ids(3, {2}), 2, fam, PuncturedMode::Excised);
    FAIL("expected PreconditionShadow");
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::PreconditionShadow);
  }
}

TEST_CASE("punctured Haag duality with a one-point excision") {
  const Causet d = diamond_poset();
  const std::vector<PointSet> fam{ids(4, {2})};
  const auto r = punctured_hd_check(d, ids(4, {2}), 1, fam, PuncturedMode::Excised);
  CHECK(r.holds);
  CHECK(r.empty_family);
}

TEST_CASE("local definiteness") {
  const Causet d = diamond_poset();
  const std::vector<PointSet> fam{ids(4, {1}), d.all()};
  const auto r = local_definiteness_check(d, 1, fam);
  CHECK(r.intersection == algebra_of_sites(4, ids(4, {1})));
  CHECK(r.minimal);
  const auto single = local_definiteness_check(d, 1, {d.all()});
  CHECK(single.intersection == algebra_of_sites(4, d.all()));
  CHECK_THROWS_AS(local_definiteness_check(d, 1, {ids(4, {2})}), LabError);
}

TEST_CASE("outer regularity") {
  const Causet d = diamond_poset();
  const auto coarse = outer_regularity_check(d, ids(4, {1}), {ids(4, {1}), d.all()});
  CHECK_FALSE(coarse.holds);
  CHECK(coarse.intersection == AlgebraBasis::everything(4));

  // Without a buffer, {1,2} and {2,3} in a chain pin down {2} exactly.
  const Causet ch = from_pairs(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto fine = outer_regularity_check(ch, ids(4, {2}), {ids(4, {1, 2}), ids(4, {2, 3})}, 0);
  CHECK(fine.holds);
  CHECK(fine.supersets == 2);
  CHECK_THROWS_AS(outer_regularity_check(d, d.all(), {d.all()}), LabError);
}

TEST_CASE("generation") {
  CHECK(generation_check(antichain(2)).holds);
  CHECK(generation_check(from_pairs(3, {{0, 1}, {1, 2}})).holds);
  CHECK_FALSE(generation_check(antichain(1)).holds);
}

TEST_CASE("bridge with identical families is trivially equal") {
  const Causet c = causet::sprinkle(continuum::SpacetimeModel::minkowski(1, continuum::Window::unit_box(1)), 30.0, 1);
  for (std::size_t p = 0; p < c.size(); ++p) {
    const auto f = causet::build_punctured_families(c, p);
    if (f.through_point_cauchy == 0) continue;
    const auto r = cofinality_bridge(c, p, f.fam_a, f.fam_a, f.fam_a);
    CHECK(r.all_equal);
    CHECK_FALSE(r.unexplained);
    const auto full = cofinality_bridge(c, p, f.fam_a, f.fam_b, f.shared);
    CHECK(full.all_equal);
  }
}

TEST_CASE("pruned famB discrepancies carry interpolation failures") {
  std::size_t discrepancies = 0;
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Causet c = causet::sprinkle(continuum::SpacetimeModel::minkowski(1, continuum::Window::unit_box(1)), 32.0, seed);
    for (std::size_t p = 0; p < c.size(); ++p) {
      const auto f = causet::build_punctured_families(c, p);
      if (f.through_point_cauchy == 0) continue;
      std::vector<causet::DiamondSpec> pruned;
      for (const auto& d : f.fam_b) {
        if (rng() % 3 != 0) pruned.push_back(d);
      }
      const auto r = cofinality_bridge(c, p, f.fam_a, pruned, shared_diamonds(f.fam_a, pruned));
      CHECK_FALSE(r.unexplained);
      for (const auto& e : r.discrepancies) CHECK_FALSE(e.explanations.empty());
      discrepancies += r.discrepancies.size();
    }
  }
  CHECK(discrepancies > 0);
}
