#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "causal_lab/errors.hpp"
#include "causal_lab/surfaces.hpp"

using namespace clab;
using namespace clab::continuum;

namespace {

Event ev(double t, double x, double y = 0.0, double z = 0.0) { return {t, {x, y, z}}; }

SpacetimeModel big(int dim) { return SpacetimeModel::minkowski(dim, Window::cube(dim, -5.0, 5.0)); }

SpacetimeModel excised_at_origin(int dim) {
  return SpacetimeModel::excised_minkowski(dim, Window::cube(dim, -5.0, 5.0), ev(0.0, 0.0));
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const LabError& e) {
    return e.code();
  }
  FAIL("expected a LabError");
  return ErrorCode::InvalidArgument;
}

SurfaceFunction half_cone(const SpatialGrid& g) {
  const int d = g.dim;
  return SurfaceFunction::from_closure(g, [d](const Spatial& y) { return spatial_norm(y, d) / 2.0; },
                                       Regularity::Continuous);
}

SurfaceFunction flat(const SpatialGrid& g, double t = 0.0) {
  return SurfaceFunction::from_closure(g, [t](const Spatial&) { return t; }, Regularity::Smooth);
}

}  // namespace

TEST_CASE("windows and models validate their inputs") {
  CHECK_THROWS_AS(SpacetimeModel::minkowski(1, Window::cube(1, 1.0, 1.0)), LabError);
  CHECK(code_of([] { (void)SpacetimeModel::excised_minkowski(1, Window::unit_box(1), ev(1.0, 0.5)); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { (void)causal_relation(big(1), ev(0, 0), ev(7, 0)); }) == ErrorCode::OutOfWindow);
}

TEST_CASE("causal relation in 1+3") {
  const auto m = big(3);
  CHECK(causal_relation(m, ev(0, 0), ev(1, 0.5)) == CausalRelation::Chronological);
  CHECK(causal_relation(m, ev(0, 0), ev(1, 1)) == CausalRelation::Lightlike);
  CHECK(causal_relation(m, ev(0, 0), ev(0.5, 2)) == CausalRelation::Spacelike);
  CHECK(causal_relation(m, ev(0.3, 0.1), ev(0.3, 0.1)) == CausalRelation::Identical);
}

TEST_CASE("causal relation is symmetric, translation and rotation invariant") {
  const auto m = big(3);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const Event a = ev(u(rng), u(rng), u(rng), u(rng));
    const Event b = ev(u(rng), u(rng), u(rng), u(rng));
    const auto r = causal_relation(m, a, b);
    CHECK(r == causal_relation(m, b, a));
    const TimeOrder o = time_order(a, b);
    const TimeOrder back = time_order(b, a);
    CHECK((o == TimeOrder::Future) == (back == TimeOrder::Past));
    // Dyadic shift keeps the arithmetic exact.
    const Event sa = ev(a.t + 0.5, a.x[0] - 0.25, a.x[1] + 0.125, a.x[2]);
    const Event sb = ev(b.t + 0.5, b.x[0] - 0.25, b.x[1] + 0.125, b.x[2]);
    if (r != CausalRelation::Lightlike) CHECK(causal_relation(m, sa, sb) == r);
    // Quarter turn in the x-y plane is exact too.
    const Event ra = ev(a.t, -a.x[1], a.x[0], a.x[2]);
    const Event rb = ev(b.t, -b.x[1], b.x[0], b.x[2]);
    CHECK(causal_relation(m, ra, rb) == r);
  }
}

TEST_CASE("J+ of a point is closed") {
  const auto m = big(1);
  const Event s = ev(0.0, 0.0);
  // q_k = (1, 1 - 1/k) lie in J+(s) and converge to the lightlike (1, 1).
  for (int k = 1; k < 50; ++k) CHECK(causally_precedes(m, s, ev(1.0, 1.0 - 1.0 / k)));
  CHECK(causally_precedes(m, s, ev(1.0, 1.0)));
  CHECK_FALSE(causally_precedes(m, s, ev(1.0, 1.0 + 1e-9)));
}

TEST_CASE("excision membership") {
  const auto m = excised_at_origin(3);
  CHECK_FALSE(excision_membership(m, ev(1, 0.1)));
  CHECK(excision_membership(m, ev(0.5, 2)));
  CHECK_FALSE(excision_membership(m, ev(0, 0)));
}

TEST_CASE("cone-shaped surface membership") {
  const auto m = excised_at_origin(3);
  CHECK(surface_membership_co(m, ev(1, 2)));
  CHECK_FALSE(surface_membership_co(m, ev(1, 1)));
  CHECK_FALSE(surface_membership_co(m, ev(0, 0)));
}

TEST_CASE("diamond membership") {
  const auto m = big(1);
  const auto d = make_ball_diamond(m, 0.0, {0.0}, 1.0);
  CHECK(diamond_membership(m, d, ev(0.5, 0.3)));
  CHECK_FALSE(diamond_membership(m, d, ev(0.5, 0.6)));
  CHECK(diamond_membership(m, d, ev(0.0, 0.0)));
  CHECK_THROWS_AS(make_ball_diamond(m, 0.0, {0.0}, 0.0), LabError);
}

TEST_CASE("diamond membership agrees with sampled past-endless causal curves") {
  // A piecewise-linear causal curve heading to the past crosses t = t0 at a
  // spatial point within |dt| of its start; membership in the upper half
  // means every such crossing lands in the base ball.
  const int dim = 3;
  const auto m = big(dim);
  const auto d = make_ball_diamond(m, 0.0, {0.0, 0.0, 0.0}, 1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);
  int members = 0;
  int outsiders_escaped = 0;
  int outsiders = 0;
  for (int k = 0; k < 200; ++k) {
    const Event q = ev(std::abs(u(rng)), u(rng), u(rng), u(rng));
    const bool member = diamond_membership(m, d, q);
    bool all_cross = true;
    for (int curve = 0; curve < 1000 && (member || all_cross); ++curve) {
      Event x = q;
      const int legs = 1 + static_cast<int>(rng() % 4);
      for (int leg = 0; leg < legs && x.t > 0.0; ++leg) {
        const double dt = leg + 1 == legs ? x.t : std::min(x.t, std::abs(u(rng)) * x.t);
        Spatial dir{g(rng), g(rng), g(rng)};
        const double norm = spatial_norm(dir, dim);
        const double speed = curve == 0 ? 1.0 : std::abs(u(rng));
        for (int a = 0; a < dim; ++a) x.x[static_cast<std::size_t>(a)] += dir[static_cast<std::size_t>(a)] / norm * speed * dt;
        x.t -= dt;
      }
      if (spatial_norm(x.x, dim) >= 1.0) all_cross = false;
    }
    if (member) {
      ++members;
      CHECK(all_cross);
    } else if (spatial_norm(q.x, dim) + q.t >= 1.0) {
      // Outside the closed cone a null line straight away from the center escapes.
      ++outsiders;
      Spatial out = q.x;
      const double r = spatial_norm(q.x, dim);
      for (int a = 0; a < dim; ++a) out[static_cast<std::size_t>(a)] += r > 0 ? q.x[static_cast<std::size_t>(a)] / r * q.t : 0.0;
      if (spatial_norm(out, dim) >= 1.0) ++outsiders_escaped;
    }
  }
  CHECK(members > 10);
  CHECK(outsiders_escaped == outsiders);
}

TEST_CASE("causally disjoint cones") {
  const auto m = big(1);
  const auto left = make_ball_diamond(m, 0.0, {-0.5}, 0.5);
  const auto right = make_ball_diamond(m, 0.0, {1.0}, 0.5);
  const auto overlap = make_ball_diamond(m, 0.0, {0.0}, 0.5);
  CHECK(causally_disjoint_cones(m, left, right));
  CHECK_FALSE(causally_disjoint_cones(m, left, overlap));
  CHECK_FALSE(causally_disjoint_cones(m, left, left));
}

TEST_CASE("deforming the half cone through its apex") {
  for (int dim : {1, 3}) {
    const double h = dim == 1 ? 0.05 : 0.5;
    const auto grid = SpatialGrid::with_spacing(dim, -5.0, 5.0, h);
    const auto tau = half_cone(grid);
    const Event p = ev(0.0, 0.0);
    for (double eps : {0.1, 0.01}) {
      const auto e = constant_epsilon(eps);
      const auto r = deform_surface_through_point(tau, p, e);
      CHECK(r.surface(p.x) == 0.0);
      const auto c = verify_deformation(tau, r.surface, p, e, grid, 1e-6, true);
      CHECK(c.ok());
      CHECK(c.sup_error < 1.0);
      CHECK(c.max_gradient <= 1.0 - 1e-6);
      CHECK(check_achronal(r.surface).ok);
    }
  }
}

TEST_CASE("pointwise tolerance") {
  const auto grid = SpatialGrid::with_spacing(1, -5.0, 5.0, 0.05);
  const auto tau = half_cone(grid);
  const EpsilonFunction e = [](const Spatial& y) { return 0.01 * (1.0 + std::abs(y[0])); };
  const auto r = deform_surface_through_point(tau, ev(0, 0), e);
  CHECK(verify_deformation(tau, r.surface, ev(0, 0), e, grid.refined(), 1e-6, true).ok());
}

TEST_CASE("a smooth surface through p is returned unchanged") {
  const auto grid = SpatialGrid::with_spacing(1, -2.0, 2.0, 0.05);
  const auto r = deform_surface_through_point(flat(grid), ev(0, 0), constant_epsilon(0.1));
  CHECK(r.unchanged);
  CHECK(r.surface.samples() == flat(grid).samples());
}

TEST_CASE("squeeze conditions") {
  const auto grid = SpatialGrid::with_spacing(1, -2.0, 2.0, 0.05);
  const auto tau = flat(grid);
  const SpatialBall g{{0.0}, 0.2};
  const SpatialBall u1{{0.0}, 0.5};
  const SpatialBall u2{{0.0}, 0.9};
  const auto deformed = deform_surface_through_point(tau, ev(0, 0), constant_epsilon(0.05));
  const auto ok = check_squeeze_conditions(tau, deformed.surface, g, u1, u2);
  CHECK(ok.cond_a);
  CHECK(ok.cond_b);
  CHECK_FALSE(ok.witness_a.has_value());

  CHECK(code_of([&] { (void)check_squeeze_conditions(tau, deformed.surface, g, g, u2); }) ==
        ErrorCode::PreconditionNesting);

  const auto far = flat(grid, 3.0);
  const auto bad = check_squeeze_conditions(tau, far, g, u1, u2);
  CHECK_FALSE(bad.cond_a);
  REQUIRE(bad.witness_a.has_value());
  CHECK(spatial_distance(*bad.witness_a, u1.center, 1) >= u1.radius);
}

TEST_CASE("interpolate_cone around the excised origin") {
  const auto m = SpacetimeModel::excised_minkowski(1, Window::cube(1, -2.0, 2.0), ev(0.0, 0.0));
  const auto inner = make_ball_diamond(m, 0.0, {1.25}, 0.25);
  const auto outer = make_ball_diamond(m, 0.0, {1.25}, 0.45);
  const auto r = interpolate_cone(m, inner, outer);
  CHECK(r.check.ok());
  CHECK(r.refined.ok());
  CHECK(r.refined.h == doctest::Approx(r.check.h / 2));
  CHECK(cone_disjoint_from_point(r.cone, ev(0, 0), 1));

  const auto touching = BallDiamond{0.0, {0.2}, 0.25};
  CHECK(code_of([&] { (void)interpolate_cone(m, touching, outer); }) == ErrorCode::ShadowOverlap);
  CHECK(code_of([&] { (void)interpolate_cone(m, inner, inner); }) == ErrorCode::NoRoom);
}
