#include <doctest.h>

#include <algorithm>
#include <random>

#include "causal_lab/errors.hpp"
#include "causal_lab/families.hpp"
#include "oracles/chains.hpp"

using namespace clab;
using namespace clab::causet;

namespace {

Causet from_pairs(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
  BitMatrix raw(n);
  for (auto [i, j] : pairs) raw.set(i, j);
  return Causet::from_relation(raw);
}

// a=0, b=1, c=2, d=3 with a<b, a<c, b<d, c<d.
Causet diamond_poset() { return from_pairs(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }
// a=0 < b=1 < c=2.
Causet chain3() { return from_pairs(3, {{0, 1}, {1, 2}}); }

PointSet ids(std::size_t n, std::initializer_list<std::size_t> v) { return PointSet(n, v); }

SpacetimeModel box(int dim) { return SpacetimeModel::minkowski(dim, continuum::Window::unit_box(dim)); }

}  // namespace

TEST_CASE("three injected events form a chain") {
  std::vector<Event> ev(3);
  ev[0] = {0.0, {0.0}};
  ev[1] = {0.5, {0.1}};
  ev[2] = {1.0, {0.0}};
  const auto model = SpacetimeModel::minkowski(1, continuum::Window::cube(1, -1.0, 2.0));
  const Causet c = from_events(model, ev);
  CHECK(c.precedes(0, 1));
  CHECK(c.precedes(1, 2));
  CHECK(c.precedes(0, 2));
  CHECK(c.hasse().count() == 2);
}

TEST_CASE("sprinkling at density 10 satisfies the order axioms") {
  const Causet c = sprinkle(box(1), 10.0, 42);
  CHECK(c.check_axioms());
  CHECK(transitive_closure(transitive_reduction(c.order())) == c.order());
}

TEST_CASE("density zero gives an empty causet and regions are rejected") {
  const Causet c = sprinkle(box(1), 0.0, 1);
  CHECK(c.empty());
  CHECK_THROWS_AS(make_region(c, c.none(), RegionKind::Convex), LabError);
  CHECK(convex_region_family(c).regions.empty());
}

TEST_CASE("transitive closure") {
  SUBCASE("chain gains the long relation") {
    const Causet c = chain3();
    CHECK(c.precedes(0, 2));
  }
  SUBCASE("diamond poset gains only a<d") {
    const Causet c = diamond_poset();
    CHECK(c.order().count() == 5);
    CHECK(c.precedes(0, 3));
    CHECK_FALSE(c.comparable(1, 2));
  }
  SUBCASE("a 2-cycle is rejected") {
    BitMatrix raw(2);
    raw.set(0, 1);
    raw.set(1, 0);
    try {
      (void)transitive_closure(raw);
      FAIL("expected CycleDetected");
    } catch (const LabError& e) {
      CHECK(e.code() == ErrorCode::CycleDetected);
    }
  }
}

TEST_CASE("closure matches Floyd-Warshall on random DAGs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    BitMatrix raw(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (rng() % 5 == 0) raw.set(i, j);
      }
    }
    const BitMatrix order = transitive_closure(raw);
    CHECK(order == oracle::closure(raw));
    CHECK(transitive_closure(transitive_reduction(order)) == order);
  }
}

TEST_CASE("futures and pasts") {
  const Causet ch = chain3();
  CHECK(future_of(ch, 0, Mode::Reflexive) == ids(3, {0, 1, 2}));
  CHECK(future_of(ch, 0, Mode::Strict) == ids(3, {1, 2}));
  const Causet d = diamond_poset();
  CHECK(future_of(d, 1, Mode::Reflexive) == ids(4, {1, 3}));
  CHECK(past(d, ids(4, {1, 2}), Mode::Strict) == ids(4, {0}));
  CHECK(causal_hull(d, ids(4, {1})) == ids(4, {0, 1, 3}));
}

TEST_CASE("future over coordinates equals the continuum future") {
  for (int dim : {1, 3}) {
    const auto model = box(dim);
    const Causet c = sprinkle(model, dim == 1 ? 60.0 : 80.0, 9);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const PointSet f = future_of(c, i, Mode::Reflexive);
      for (std::size_t j = 0; j < c.size(); ++j) {
        CHECK(f.test(j) == continuum::causally_precedes(model, c.coords()[i], c.coords()[j]));
      }
    }
  }
}

TEST_CASE("domain of dependence on the diamond poset") {
  const Causet d = diamond_poset();
  CHECK(dependence_future(d, ids(4, {1, 2})) == ids(4, {1, 2, 3}));
  CHECK(domain_of_dependence(d, ids(4, {1, 2})) == d.all());
  CHECK(dependence_future(d, ids(4, {1})) == ids(4, {1}));
  const auto chain = uncovered_chain(d, ids(4, {1}), 3);
  REQUIRE_FALSE(chain.empty());
  for (std::size_t v : chain) CHECK(v != 1);
}

TEST_CASE("Cauchy slices") {
  CHECK(is_cauchy_slice(diamond_poset(), ids(4, {1, 2})));
  CHECK(is_cauchy_slice(chain3(), ids(3, {1})));
  CHECK_FALSE(is_cauchy_slice(diamond_poset(), ids(4, {1})));
  CHECK_THROWS_AS((void)is_cauchy_slice(chain3(), ids(3, {0, 1})), LabError);
}

TEST_CASE("domain of dependence matches chain enumeration") {
  std::mt19937_64 rng(17);
  for (int seed = 0; seed < 30; ++seed) {
    const Causet c = sprinkle(box(seed % 2 == 0 ? 1 : 3), 14.0, static_cast<std::uint64_t>(seed));
    for (int k = 0; k < 6 && !c.empty(); ++k) {
      PointSet s = c.none();
      for (int m = 0; m < 4; ++m) s.set(rng() % c.size());
      CHECK(dependence_future(c, s) == oracle::dependence_future(c, s));
      CHECK(dependence_past(c, s) == oracle::dependence_past(c, s));
    }
  }
}

TEST_CASE("dependence future is monotone and contains its set") {
  std::mt19937_64 rng(23);
  const Causet c = sprinkle(box(1), 50.0, 3);
  for (int k = 0; k < 200; ++k) {
    PointSet s = c.none();
    for (int m = 0; m < 3; ++m) s.set(rng() % c.size());
    PointSet t = s;
    for (int m = 0; m < 3; ++m) t.set(rng() % c.size());
    const PointSet ds = dependence_future(c, s);
    CHECK(s.is_subset_of(ds));
    CHECK(ds.is_subset_of(dependence_future(c, t)));
  }
}

TEST_CASE("excision") {
  SUBCASE("diamond poset minus J(b) is {c}") {
    const auto e = excise(diamond_poset(), 1);
    REQUIRE(e.causet.size() == 1);
    CHECK(e.to_ambient[0] == 2);
    CHECK(e.causet.past_boundary().test(0));
    CHECK(e.causet.future_boundary().test(0));
  }
  SUBCASE("chain minus its middle is empty") { CHECK(excise(chain3(), 1).causet.empty()); }
  SUBCASE("two incomparable points") {
    const auto e = excise(from_pairs(2, {}), 0);
    REQUIRE(e.causet.size() == 1);
    CHECK(e.to_ambient[0] == 1);
  }
  SUBCASE("boundary-aware domains agree with chain enumeration") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      const Causet c = sprinkle(box(1), 16.0, seed);
      if (c.size() < 3) continue;
      const auto e = excise(c, c.size() / 2);
      std::mt19937_64 rng(seed);
      for (int k = 0; k < 5 && !e.causet.empty(); ++k) {
        PointSet s = e.causet.none();
        for (int m = 0; m < 3; ++m) s.set(rng() % e.causet.size());
        CHECK(dependence_future(e.causet, s) == oracle::dependence_future(e.causet, s));
        CHECK(dependence_past(e.causet, s) == oracle::dependence_past(e.causet, s));
      }
    }
  }
}

TEST_CASE("slice excision on the diamond poset") {
  const auto r = prop33_check(diamond_poset(), ids(4, {1, 2}), 1);
  CHECK(r.forward);
  CHECK(r.converse);
}

TEST_CASE("plain restriction breaks the converse; boundary marks restore it") {
  // y < a, y < x, p < x with ids y=0, a=1, x=2, p=3. J(p) = {p, x}, so the
  // excision is y < a, and y links up into J(p).
  const Causet c = from_pairs(4, {{0, 1}, {0, 2}, {3, 2}});
  const auto e = excise(c, 3);
  REQUIRE(e.causet.size() == 2);
  const PointSet a_only = e.from_ambient_set(ids(4, {1}));

  // Restricted order alone: {a} looks Cauchy, yet {a, p} misses the chain y < x.
  const Causet plain = Causet::from_order(e.causet.order());
  CHECK(is_cauchy_slice(plain, a_only));
  CHECK_FALSE(is_cauchy_slice(c, ids(4, {1, 3})));

  // The future-boundary mark on y lets a chain stop there, so {a} is not Cauchy.
  CHECK(e.causet.future_boundary().test(e.from_ambient[0]));
  CHECK_FALSE(is_cauchy_slice(e.causet, a_only));
  CHECK_FALSE(oracle::is_cauchy(e.causet, a_only));
  CHECK_THROWS_AS((void)prop33_check(c, ids(4, {0, 3}), 3, a_only), LabError);

  const auto r = prop33_check(c, ids(4, {0, 3}), 3);
  CHECK(r.forward);
  CHECK(r.converse);
}

TEST_CASE("slice excision holds on sprinkled level slices") {
  for (int dim : {1, 3}) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      const Causet c = sprinkle(box(dim), dim == 1 ? 40.0 : 50.0, seed);
      for (double t : {0.3, 0.5, 0.7}) {
        const auto a = level_slice(c, t);
        if (!a) continue;
        REQUIRE(oracle::is_cauchy(c, a->points));
        a->points.for_each([&](std::size_t p) {
          const auto r = prop33_check(c, a->points, p);
          CHECK(r.forward);
          CHECK(r.converse);
          const auto e = excise(c, p);
          CHECK(oracle::is_cauchy(e.causet, e.from_ambient_set(a->points - PointSet(c.size(), {p}))));
        });
      }
    }
  }
}

TEST_CASE("convex regions") {
  const Causet d = diamond_poset();
  const auto fam = convex_region_family(d);
  CHECK(fam.exhaustive);
  auto has = [&](PointSet s) { return std::find(fam.regions.begin(), fam.regions.end(), s) != fam.regions.end(); };
  CHECK(has(ids(4, {1})));
  CHECK(has(ids(4, {2})));
  CHECK(has(ids(4, {0, 1})));
  CHECK(has(d.all()));
  for (const auto& r : fam.regions) CHECK(is_convex_region(d, r));
  CHECK(is_order_convex(chain3(), ids(3, {0, 1})));
  CHECK_FALSE(is_order_convex(chain3(), ids(3, {0, 2})));
}

TEST_CASE("excised convex family equality") {
  CHECK(eq35_check(diamond_poset(), 1).equal);
  const auto r = eq35_check(chain3(), 1);
  CHECK(r.equal);
  CHECK(r.excised_family == 0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Causet c = sprinkle(box(1), 10.0, seed);
    for (std::size_t p = 0; p < c.size(); ++p) CHECK(eq35_check(c, p).equal);
  }
}

TEST_CASE("causal disjointness") {
  const Causet d = diamond_poset();
  CHECK(causally_disjoint(d, ids(4, {1}), ids(4, {2})));
  CHECK_FALSE(causally_disjoint(chain3(), ids(3, {0}), ids(3, {2})));
  CHECK(causally_disjoint(d, ids(4, {1}), d.none()));
  std::mt19937_64 rng(31);
  const Causet c = sprinkle(box(1), 40.0, 2);
  for (int k = 0; k < 300; ++k) {
    const PointSet a = sample_convex_region(c, c.all(), rng);
    const PointSet b = sample_convex_region(c, c.all(), rng);
    const bool ab = causally_disjoint(c, a, b);
    CHECK(ab == causally_disjoint(c, b, a));
    if (ab) {
      PointSet a2 = a;
      a2.reset(a.first());
      CHECK(causally_disjoint(c, a2, b));
    }
  }
}

TEST_CASE("diamonds on a slice") {
  const Causet d = diamond_poset();
  const Slice a = make_slice(d, ids(4, {1, 2}));
  const auto ds = diamonds_on_slice(d, a);
  REQUIRE(ds.size() == 3);
  CHECK(ds[0].span == ids(4, {1}));
  CHECK(ds[1].span == ids(4, {2}));
  CHECK(ds[2].span == d.all());

  const Causet one = from_pairs(1, {});
  const auto single = diamonds_on_slice(one, make_slice(one, one.all()));
  REQUIRE(single.size() == 1);
  CHECK(single[0].span == one.all());

  const Causet c = sprinkle(box(1), 30.0, 4);
  for (const auto& dm : level_diamonds(c)) {
    CHECK(is_order_convex(c, dm.span));
    CHECK(dm.span == domain_of_dependence(c, dm.base));
  }
}

TEST_CASE("slice through a point") {
  const Causet d = diamond_poset();
  const Slice bc = make_slice(d, ids(4, {1, 2}));
  const auto r = slice_through_point(d, bc, 0);
  CHECK(r.slice.points == ids(4, {0}));
  CHECK(r.slice.maximal);
  const auto same = slice_through_point(d, bc, 1);
  CHECK(same.unchanged);
  CHECK(same.slice.points == bc.points);

  const Causet c = sprinkle(box(1), 40.0, 3);
  const auto a = level_slice(c, 0.5);
  REQUIRE(a);
  for (std::size_t p = 0; p < c.size(); ++p) {
    const auto s = slice_through_point(c, *a, p);
    CHECK(s.slice.points.test(p));
    CHECK(is_maximal_antichain(c, s.slice.points));
    CHECK((a->points - causal_hull(c, PointSet(c.size(), {p}))).is_subset_of(s.slice.points));
  }
}

TEST_CASE("interpolate_diamond") {
  const Causet d = diamond_poset();
  const Slice bc = make_slice(d, ids(4, {1, 2}));
  const auto shared = diamonds_on_slice(d, bc);
  const auto r = interpolate_diamond(d, shared[0], d.all(), shared);
  REQUIRE(r.ok());
  CHECK(shared[0].span.is_subset_of(r.diamond->span));
  const auto bad = interpolate_diamond(d, shared[0], shared[0].span, shared);
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.failure->reason == NoInterpolant::Reason::PreconditionViolated);
  CHECK(bad.failure->witness.has_value());
}

TEST_CASE("punctured families interpolate on sprinklings") {
  std::size_t pairs = 0;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Causet c = sprinkle(box(1), 40.0, seed);
    for (std::size_t p = 0; p < c.size(); ++p) {
      const auto f = build_punctured_families(c, p);
      if (f.through_point_cauchy == 0) continue;
      const PointSet single(c.size(), {p});
      for (const auto* fam : {&f.fam_a, &f.fam_b}) {
        for (const auto& in : *fam) {
          const PointSet buf = hasse_buffer(c, in.span);
          for (const auto& out : *fam) {
            if (in.span == out.span || !buf.is_subset_of(out.span) || !causally_disjoint(c, out.span, single)) continue;
            ++pairs;
            CHECK(interpolate_diamond(c, in, out.span, f.shared).ok());
          }
        }
      }
      break;
    }
  }
  CHECK(pairs > 0);
}
