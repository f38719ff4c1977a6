#include <algorithm>
#include <set>

#include "causal_lab/errors.hpp"
#include "causal_lab/scenario.hpp"

namespace clab::harness {

namespace {

using causet::Causet;
using causet::DiamondSpec;
using causet::Mode;
using causet::PointSet;
using continuum::Event;
using continuum::Spatial;

// --- parameter helpers ------------------------------------------------------

std::size_t point_param(const Context& ctx, const json& params) {
  if (params.contains("p")) {
    const auto p = params["p"].get<std::size_t>();
    if (p >= ctx.c.size()) fail(ErrorCode::InvalidArgument, "params.p out of range");
    return p;
  }
  if (!ctx.p) fail(ErrorCode::InvalidArgument, "no marked point");
  return *ctx.p;
}

Event event_param(const json& j, int dim) {
  Event e;
  e.t = j.at(0).get<double>();
  for (int k = 0; k < dim; ++k) e.x[static_cast<std::size_t>(k)] = j.at(static_cast<std::size_t>(k) + 1).get<double>();
  return e;
}

Spatial spatial_param(const json& j, int dim) {
  Spatial y{};
  for (int k = 0; k < dim; ++k) y[static_cast<std::size_t>(k)] = j.at(static_cast<std::size_t>(k)).get<double>();
  return y;
}

continuum::BallDiamond ball_param(const json& j, int dim) {
  return {j.at("t").get<double>(), spatial_param(j.at("center"), dim), j.at("radius").get<double>()};
}

continuum::SpatialBall spatial_ball_param(const json& j, int dim) {
  return {spatial_param(j.at("center"), dim), j.at("radius").get<double>()};
}

json event_json(const Event& e, int dim) {
  json out = json::array({e.t});
  for (int k = 0; k < dim; ++k) out.push_back(e.x[static_cast<std::size_t>(k)]);
  return out;
}

json spatial_json(const Spatial& y, int dim) {
  json out = json::array();
  for (int k = 0; k < dim; ++k) out.push_back(y[static_cast<std::size_t>(k)]);
  return out;
}

const std::vector<DiamondSpec>& punctured(const Context& ctx, const std::string& which) {
  if (!ctx.punctured) fail(ErrorCode::InvalidArgument, "no marked point for punctured families");
  if (which == "fam_a") return ctx.punctured->fam_a;
  if (which == "fam_b") return ctx.punctured->fam_b;
  if (which == "shared") return ctx.punctured->shared;
  if (which == "ambient") return ctx.punctured->ambient;
  fail(ErrorCode::InvalidArgument, "unknown family '" + which + "'");
}

std::vector<PointSet> family_param(const Context& ctx, const json& params, std::mt19937_64& rng) {
  if (params.contains("regions")) {
    std::vector<PointSet> out;
    for (const json& r : params["regions"]) out.push_back(io::ids_from_json(r, ctx.c.size()));
    return out;
  }
  const std::string which = params.value("family", std::string("diamonds"));
  if (which == "diamonds") return causet::spans_of(ctx.diamonds);
  if (which.rfind("slices:", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoul(which.substr(7));
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidArgument, "bad family '" + which + "'");
    }
    if (k >= ctx.slices.size()) fail(ErrorCode::InvalidArgument, "family '" + which + "': no such slice");
    std::vector<PointSet> out;
    for (const auto& d : ctx.diamonds) {
      if (d.slice.points == ctx.slices[k].points) out.push_back(d.span);
    }
    return out;
  }
  if (which == "convex") {
    causet::FamilyOptions o;
    o.sample_budget = ctx.samples;
    o.seed = rng();
    return causet::convex_region_family(ctx.c, o).regions;
  }
  return causet::spans_of(punctured(ctx, which));
}

std::vector<PointSet> distinct(std::vector<PointSet> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<std::string> pauli_labels(const std::vector<duality::PauliString>& w, std::size_t limit = 8) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < w.size() && i < limit; ++i) out.push_back(w[i].label());
  return out;
}

continuum::SurfaceFunction named_surface(const std::string& name, const continuum::SpatialGrid& grid) {
  const int d = grid.dim;
  if (name == "half_cone") {
    return continuum::SurfaceFunction::from_closure(
        grid, [d](const Spatial& y) { return continuum::spatial_norm(y, d) / 2.0; }, continuum::Regularity::Continuous);
  }
  if (name == "flat") {
    return continuum::SurfaceFunction::from_closure(
        grid, [](const Spatial&) { return 0.0; }, continuum::Regularity::Smooth);
  }
  if (name == "kinked") {
    return continuum::SurfaceFunction::from_closure(
        grid,
        [d](const Spatial& y) {
          Spatial z = y;
          z[0] -= 1.3;
          return 0.05 * y[0] + 0.3 * continuum::spatial_norm(z, d);
        },
        continuum::Regularity::Continuous);
  }
  fail(ErrorCode::InvalidArgument, "unknown surface '" + name + "'");
}

// --- continuum --------------------------------------------------------------

Outcome check_causal_relation(const Context& ctx, const json& params, std::mt19937_64&) {
  Outcome o;
  const int dim = ctx.model.dim();
  std::size_t mismatches = 0;
  std::size_t pairs = 0;
  // Induced order of the sprinkling against the continuum verdict.
  if (ctx.c.has_coords()) {
    const auto& xs = ctx.c.coords();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (i == j) continue;
        ++pairs;
        const bool ordered = continuum::causally_precedes(ctx.model, xs[i], xs[j]);
        if (ordered != ctx.c.precedes(i, j)) ++mismatches;
      }
    }
  }
  json cases = json::array();
  for (const json& pc : params.value("pairs", json::array())) {
    const auto r = continuum::causal_relation(ctx.model, event_param(pc.at("a"), dim), event_param(pc.at("b"), dim));
    const std::string got(continuum::to_string(r));
    const std::string want = pc.value("expect", got);
    if (got != want) ++mismatches;
    cases.push_back({{"got", got}, {"expect", want}});
  }
  o.holds = mismatches == 0;
  o.details = {{"pairs", pairs}, {"mismatches", mismatches}, {"cases", cases}};
  return o;
}

Outcome check_excision_membership(const Context& ctx, const json& params, std::mt19937_64&) {
  const int dim = ctx.model.dim();
  const auto model = params.contains("model") ? parse_model(params["model"]) : ctx.model;
  if (!model.excision_point()) fail(ErrorCode::InvalidArgument, "excision_membership needs an excised model");
  const Event p = *model.excision_point();
  std::size_t mismatches = 0;
  json cases = json::array();
  for (const json& q : params.value("events", json::array())) {
    const Event e = event_param(q.at("q"), dim);
    const bool got = continuum::excision_membership(model, e);
    const bool want = q.value("expect", got);
    if (got != want) ++mismatches;
    cases.push_back({{"member", got}, {"expect", want}});
  }
  // Sprinkled points of an excised model never fall in J(p).
  std::size_t inside = 0;
  if (!params.contains("model")) {
    for (const Event& e : ctx.c.coords()) {
      if (!continuum::excision_membership(model, e)) ++inside;
    }
  }
  Outcome o;
  o.holds = mismatches == 0 && inside == 0;
  o.details = {{"p", event_json(p, dim)}, {"cases", cases}, {"sprinkled_in_shadow", inside}};
  return o;
}

Outcome check_surface_membership(const Context& ctx, const json& params, std::mt19937_64&) {
  const int dim = ctx.model.dim();
  const auto model = params.contains("model") ? parse_model(params["model"]) : ctx.model;
  std::size_t mismatches = 0;
  json cases = json::array();
  for (const json& q : params.value("events", json::array())) {
    const bool got = continuum::surface_membership_co(model, event_param(q.at("q"), dim));
    const bool want = q.value("expect", got);
    if (got != want) ++mismatches;
    cases.push_back({{"member", got}, {"expect", want}});
  }
  Outcome o;
  o.holds = mismatches == 0;
  o.details = {{"cases", cases}};
  return o;
}

Outcome check_diamond_membership(const Context& ctx, const json& params, std::mt19937_64&) {
  const int dim = ctx.model.dim();
  const auto dia = ball_param(params.at("diamond"), dim);
  std::size_t mismatches = 0;
  json cases = json::array();
  for (const json& q : params.value("events", json::array())) {
    const bool got = continuum::diamond_membership(ctx.model, dia, event_param(q.at("q"), dim));
    const bool want = q.value("expect", got);
    if (got != want) ++mismatches;
    cases.push_back({{"member", got}, {"expect", want}});
  }
  // Interior membership implies closure membership for every sprinkled point.
  std::size_t inconsistent = 0;
  for (const Event& e : ctx.c.coords()) {
    if (continuum::diamond_membership(ctx.model, dia, e) && !continuum::diamond_closure_contains(dia, e, dim)) {
      ++inconsistent;
    }
  }
  Outcome o;
  o.holds = mismatches == 0 && inconsistent == 0;
  o.details = {{"cases", cases}, {"inconsistent", inconsistent}};
  return o;
}

Outcome check_disjoint_cones(const Context& ctx, const json& params, std::mt19937_64&) {
  const int dim = ctx.model.dim();
  const auto d1 = ball_param(params.at("d1"), dim);
  const auto d2 = ball_param(params.at("d2"), dim);
  const bool a = continuum::causally_disjoint_cones(ctx.model, d1, d2);
  const bool b = continuum::causally_disjoint_cones(ctx.model, d2, d1);
  Outcome o;
  o.holds = a && b;
  o.details = {{"disjoint", a}, {"symmetric", a == b}};
  return o;
}

Outcome check_deform_surface(const Context& ctx, const json& params, std::mt19937_64&) {
  const int dim = params.value("dim", 1);
  const double extent = params.value("extent", 5.0);
  const double h = params.value("h", ctx.grid_h);
  const double eps = params.value("eps", ctx.eps);
  const auto grid = continuum::SpatialGrid::with_spacing(dim, -extent, extent, h);
  const auto tau = named_surface(params.value("surface", std::string("half_cone")), grid);
  Event p;
  if (params.contains("p")) p.x = spatial_param(params["p"], dim);
  p.t = tau(p.x);
  const auto epsf = continuum::constant_epsilon(eps);
  const auto r = continuum::deform_surface_through_point(tau, p, epsf);
  const auto coarse = continuum::verify_deformation(tau, r.surface, p, epsf, grid, 1e-6, dim == 1);
  const auto fine_grid = grid.refined();
  const auto fine =
      continuum::verify_deformation(tau, r.surface.resampled(fine_grid), p, epsf, fine_grid, 1e-6, dim == 1);
  auto summary = [](const continuum::DeformationCheck& c) {
    return json{{"through_point", c.through_point}, {"within_eps", c.within_eps}, {"spacelike", c.spacelike},
                {"achronal", c.achronal}, {"sup_error", c.sup_error}, {"max_gradient", c.max_gradient},
                {"h", c.h}};
  };
  Outcome o;
  o.holds = coarse.ok() && fine.ok();
  o.details = {{"eps", eps},
               {"kernel_width", r.kernel_width},
               {"bump_radius", r.bump_radius},
               {"attempts", r.attempts},
               {"value_at_p", r.surface(p.x)},
               {"check", summary(coarse)},
               {"refined", summary(fine)}};
  return o;
}

Outcome check_squeeze(const Context& ctx, const json& params, std::mt19937_64&) {
  const int dim = params.value("dim", 1);
  const double extent = params.value("extent", 2.0);
  const double h = params.value("h", ctx.grid_h);
  const auto grid = continuum::SpatialGrid::with_spacing(dim, -extent, extent, h);
  const auto tau = named_surface(params.value("surface", std::string("kinked")), grid);
  Event p;
  p.x = spatial_param(params.at("p"), dim);
  p.t = tau(p.x);
  const auto g = spatial_ball_param(params.at("g"), dim);
  const auto u1 = spatial_ball_param(params.at("u1"), dim);
  const auto u2 = spatial_ball_param(params.at("u2"), dim);
  const auto r = continuum::squeeze_surface(tau, p, g, u1, u2);
  Outcome o;
  o.holds = r.report.cond_a && r.report.cond_b;
  o.details = {{"cond_a", r.report.cond_a},
               {"cond_b", r.report.cond_b},
               {"eps", r.eps},
               {"sources_a", r.report.sources_a},
               {"sources_b", r.report.sources_b},
               {"witness_a", r.report.witness_a ? spatial_json(*r.report.witness_a, dim) : json()},
               {"witness_b", r.report.witness_b ? spatial_json(*r.report.witness_b, dim) : json()}};
  return o;
}

Outcome check_interpolate_cone(const Context& ctx, const json& params, std::mt19937_64&) {
  const auto model = params.contains("model") ? parse_model(params["model"]) : ctx.model;
  const int dim = model.dim();
  continuum::InterpolateConeOptions opts;
  opts.grid_h = params.value("h", ctx.grid_h);
  const auto r = continuum::interpolate_cone(model, ball_param(params.at("inner"), dim),
                                             ball_param(params.at("outer"), dim), opts);
  auto summary = [](const continuum::ConeVerification& v) {
    return json{{"ok", v.ok()}, {"inner_in_cone", v.inner_in_cone}, {"cone_in_outer", v.cone_in_outer},
                {"disjoint_from_p", v.disjoint_from_p}, {"surface_through_p", v.surface_through_p},
                {"squeeze", v.squeeze}, {"h", v.h}, {"samples", v.samples}};
  };
  Outcome o;
  o.holds = r.check.ok() && r.refined.ok();
  o.details = {{"cone", {{"t", r.cone.slice_time}, {"center", spatial_json(r.cone.center, dim)}, {"radius", r.cone.radius}}},
               {"check", summary(r.check)},
               {"refined", summary(r.refined)}};
  return o;
}

// --- causal sets ------------------------------------------------------------

Outcome check_order_axioms(const Context& ctx, const json&, std::mt19937_64&) {
  const bool axioms = ctx.c.check_axioms();
  const bool roundtrip = causet::transitive_closure(causet::transitive_reduction(ctx.c.order())) == ctx.c.order();
  Outcome o;
  o.holds = axioms && roundtrip;
  o.details = {{"n", ctx.c.size()}, {"relations", ctx.c.order().count()}, {"links", ctx.c.hasse().count()},
               {"axioms", axioms}, {"closure_of_reduction", roundtrip}};
  return o;
}

Outcome check_future(const Context& ctx, const json&, std::mt19937_64&) {
  // future({x}, reflexive) against the continuum future of x's coordinates.
  std::size_t mismatches = 0;
  const auto& xs = ctx.c.coords();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const PointSet f = causet::future_of(ctx.c, i, Mode::Reflexive);
    const PointSet s = causet::future_of(ctx.c, i, Mode::Strict);
    if (!f.test(i) || s.test(i)) ++mismatches;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (f.test(j) != continuum::causally_precedes(ctx.model, xs[i], xs[j])) ++mismatches;
    }
  }
  Outcome o;
  o.holds = ctx.c.has_coords() && mismatches == 0;
  o.details = {{"points", xs.size()}, {"mismatches", mismatches}};
  return o;
}

Outcome check_domain_of_dependence(const Context& ctx, const json& params, std::mt19937_64& rng) {
  const std::size_t n = ctx.c.size();
  std::size_t failures = 0;
  std::uniform_int_distribution<std::size_t> pick(0, n == 0 ? 0 : n - 1);
  const std::size_t trials = n == 0 ? 0 : std::min<std::size_t>(ctx.samples, 200);
  for (std::size_t k = 0; k < trials; ++k) {
    PointSet s = ctx.c.none();
    PointSet t = ctx.c.none();
    for (int m = 0; m < 3; ++m) s.set(pick(rng));
    t = s;
    for (int m = 0; m < 3; ++m) t.set(pick(rng));
    const PointSet ds = causet::dependence_future(ctx.c, s);
    if (!s.is_subset_of(ds) || !ds.is_subset_of(causet::dependence_future(ctx.c, t))) ++failures;
  }
  json cases = json::array();
  for (const json& cj : params.value("cases", json::array())) {
    const PointSet s = io::ids_from_json(cj.at("set"), n);
    const PointSet d = causet::domain_of_dependence(ctx.c, s);
    if (cj.contains("expect") && d != io::ids_from_json(cj["expect"], n)) ++failures;
    cases.push_back({{"set", io::ids_to_json(s)}, {"domain", io::ids_to_json(d)}});
  }
  Outcome o;
  o.holds = failures == 0;
  o.details = {{"monotonicity_trials", trials}, {"failures", failures}, {"cases", cases}};
  return o;
}

Outcome check_cauchy_slices(const Context& ctx, const json&, std::mt19937_64&) {
  json slices = json::array();
  bool all = !ctx.slices.empty();
  for (const auto& a : ctx.slices) {
    const bool cauchy = causet::is_cauchy_slice(ctx.c, a.points);
    all = all && cauchy && a.maximal;
    slices.push_back({{"size", a.points.count()}, {"maximal", a.maximal}, {"cauchy", cauchy}});
  }
  Outcome o;
  o.holds = all;
  o.details = {{"slices", slices}};
  return o;
}

Outcome check_excise(const Context& ctx, const json& params, std::mt19937_64&) {
  const std::size_t p = point_param(ctx, params);
  const auto e = causet::excise(ctx.c, p);
  const PointSet shadow = causet::causal_hull(ctx.c, PointSet(ctx.c.size(), {p}));
  bool ok = e.causet.size() + shadow.count() == ctx.c.size();
  for (std::size_t i = 0; i < e.causet.size() && ok; ++i) {
    ok = !shadow.test(e.to_ambient[i]) && e.from_ambient[e.to_ambient[i]] == i;
    for (std::size_t j = 0; j < e.causet.size() && ok; ++j) {
      ok = e.causet.precedes(i, j) == ctx.c.precedes(e.to_ambient[i], e.to_ambient[j]);
    }
  }
  Outcome o;
  o.holds = ok && e.causet.check_axioms();
  o.details = {{"p", p},
               {"shadow", shadow.count()},
               {"excised_n", e.causet.size()},
               {"past_boundary", io::ids_to_json(e.to_ambient_set(e.causet.past_boundary(), ctx.c.size()))},
               {"future_boundary", io::ids_to_json(e.to_ambient_set(e.causet.future_boundary(), ctx.c.size()))}};
  return o;
}

Outcome check_slice_excision(const Context& ctx, const json& params, std::mt19937_64&) {
  std::size_t checks = 0;
  std::size_t forward_failures = 0;
  std::size_t converse_failures = 0;
  std::size_t skipped = 0;
  json witnesses = json::array();
  const bool only_marked = params.value("only_marked", false);
  const std::vector<double> levels = params.value("excision_levels", std::vector<double>{0.25, 0.5, 0.75});
  for (const auto& a : ctx.slices) {
    if (!a.maximal || !causet::is_cauchy_slice(ctx.c, a.points)) {
      ++skipped;
      continue;
    }
    a.points.for_each([&](std::size_t p) {
      if (only_marked && (!ctx.p || *ctx.p != p)) return;
      auto r = causet::prop33_check(ctx.c, a.points, p);
      ++checks;
      if (!r.forward) ++forward_failures;
      if (!r.converse) ++converse_failures;
      if ((!r.forward || !r.converse) && witnesses.size() < 8) {
        witnesses.push_back({{"p", p}, {"forward", r.forward_witness}, {"converse", r.converse_witness}});
      }
      const auto e = causet::excise(ctx.c, p);
      for (double t : levels) {
        const auto ap = causet::level_slice(e.causet, t);
        if (!ap) continue;
        auto r2 = causet::prop33_check(ctx.c, a.points, p, ap->points);
        ++checks;
        if (!r2.converse) ++converse_failures;
      }
    });
  }
  Outcome o;
  o.holds = checks > 0 && forward_failures == 0 && converse_failures == 0;
  o.details = {{"checks", checks},
               {"forward_failures", forward_failures},
               {"converse_failures", converse_failures},
               {"non_cauchy_slices_skipped", skipped},
               {"witnesses", witnesses}};
  return o;
}

Outcome check_convex_regions(const Context& ctx, const json&, std::mt19937_64& rng) {
  causet::FamilyOptions opts;
  opts.sample_budget = ctx.samples;
  opts.seed = rng();
  const auto fam = causet::convex_region_family(ctx.c, opts);
  std::size_t bad = 0;
  for (const PointSet& r : fam.regions) {
    if (!causet::is_convex_region(ctx.c, r)) ++bad;
  }
  Outcome o;
  o.holds = bad == 0;
  o.details = {{"regions", fam.regions.size()}, {"exhaustive", fam.exhaustive}, {"samples", fam.samples},
               {"not_convex", bad}};
  return o;
}

Outcome check_excised_regions(const Context& ctx, const json& params, std::mt19937_64& rng) {
  causet::FamilyOptions opts;
  opts.sample_budget = ctx.samples;
  opts.seed = rng();
  std::vector<std::size_t> points;
  if (params.value("all_points", false)) {
    for (std::size_t i = 0; i < ctx.c.size(); ++i) points.push_back(i);
  } else {
    points.push_back(point_param(ctx, params));
  }
  bool equal = true;
  json per_point = json::array();
  for (std::size_t p : points) {
    const auto r = causet::eq35_check(ctx.c, p, opts);
    equal = equal && r.equal;
    json entry = {{"p", p}, {"equal", r.equal}, {"exhaustive", r.exhaustive},
                  {"excised_family", r.excised_family}, {"ambient_family", r.ambient_family}};
    if (!r.only_excised.empty()) entry["only_excised"] = io::ids_to_json(r.only_excised.front());
    if (!r.only_ambient.empty()) entry["only_ambient"] = io::ids_to_json(r.only_ambient.front());
    per_point.push_back(std::move(entry));
  }
  Outcome o;
  o.holds = equal;
  o.details = {{"points", per_point}};
  return o;
}

Outcome check_causally_disjoint(const Context& ctx, const json&, std::mt19937_64& rng) {
  const std::size_t n = ctx.c.size();
  std::size_t failures = 0;
  std::size_t disjoint_pairs = 0;
  const PointSet all = ctx.c.all();
  const std::size_t trials = n == 0 ? 0 : std::min<std::size_t>(ctx.samples, 300);
  for (std::size_t k = 0; k < trials; ++k) {
    const PointSet a = causet::sample_convex_region(ctx.c, all, rng);
    const PointSet b = causet::sample_convex_region(ctx.c, all, rng);
    const bool ab = causet::causally_disjoint(ctx.c, a, b);
    if (ab != causet::causally_disjoint(ctx.c, b, a)) ++failures;
    if (!causet::causally_disjoint(ctx.c, a, ctx.c.none())) ++failures;
    if (ab) {
      ++disjoint_pairs;
      // Monotone under shrinking either side.
      PointSet a2 = a;
      a2.reset(a.first());
      if (!causet::causally_disjoint(ctx.c, a2, b)) ++failures;
    }
  }
  Outcome o;
  o.holds = failures == 0;
  o.details = {{"trials", trials}, {"disjoint_pairs", disjoint_pairs}, {"failures", failures}};
  return o;
}

Outcome check_diamonds(const Context& ctx, const json&, std::mt19937_64&) {
  std::size_t bad = 0;
  std::size_t not_disjoint = 0;
  for (const auto& d : ctx.diamonds) {
    if (!d.base.is_subset_of(d.slice.points) || !d.base.is_subset_of(d.span) ||
        !causet::is_order_convex(ctx.c, d.span) || d.span != causet::domain_of_dependence(ctx.c, d.base)) {
      ++bad;
    }
  }
  // Disjoint bases on one Cauchy slice give causally disjoint spans: a chain
  // meets the slice at most once.
  for (std::size_t i = 0; i < ctx.diamonds.size(); ++i) {
    for (std::size_t j = i + 1; j < ctx.diamonds.size(); ++j) {
      const auto& a = ctx.diamonds[i];
      const auto& b = ctx.diamonds[j];
      if (a.slice.points != b.slice.points || a.base.intersects(b.base)) continue;
      if (!causet::causally_disjoint(ctx.c, a.span, b.span)) ++not_disjoint;
    }
  }
  Outcome o;
  o.holds = bad == 0 && not_disjoint == 0 && !ctx.diamonds.empty();
  o.details = {{"diamonds", ctx.diamonds.size()}, {"invalid", bad}, {"not_disjoint", not_disjoint}};
  return o;
}

Outcome check_slice_through_point(const Context& ctx, const json& params, std::mt19937_64&) {
  const std::size_t p = point_param(ctx, params);
  const PointSet shadow = causet::causal_hull(ctx.c, PointSet(ctx.c.size(), {p}));
  bool ok = !ctx.slices.empty();
  json out = json::array();
  for (const auto& a : ctx.slices) {
    const auto r = causet::slice_through_point(ctx.c, a, p);
    const bool retained = (a.points - shadow).is_subset_of(r.slice.points);
    const bool valid = r.slice.points.test(p) && causet::is_maximal_antichain(ctx.c, r.slice.points) && retained;
    ok = ok && valid;
    out.push_back({{"method", r.method}, {"cauchy", r.cauchy}, {"retained", retained}, {"valid", valid},
                   {"size", r.slice.points.count()}});
  }
  Outcome o;
  o.holds = ok;
  o.details = {{"p", p}, {"slices", out}};
  return o;
}

Outcome check_interpolate_diamond(const Context& ctx, const json&, std::mt19937_64&) {
  if (!ctx.punctured) fail(ErrorCode::InvalidArgument, "no marked point for punctured families");
  const auto& f = *ctx.punctured;
  const std::size_t p = f.p;
  const PointSet single(ctx.c.size(), {p});
  std::size_t pairs = 0;
  std::size_t ok = 0;
  std::size_t precondition = 0;
  std::size_t gaps = 0;
  json failures = json::array();
  for (const auto* fam : {&f.fam_a, &f.fam_b}) {
    for (const auto& inner : *fam) {
      const PointSet buffer = causet::hasse_buffer(ctx.c, inner.span);
      for (const auto& outer : *fam) {
        if (inner.span == outer.span || !buffer.is_subset_of(outer.span)) continue;
        if (!causet::causally_disjoint(ctx.c, outer.span, single)) continue;
        ++pairs;
        const auto r = causet::interpolate_diamond(ctx.c, inner, outer.span, f.shared);
        if (r.ok()) {
          ++ok;
        } else if (r.failure->reason == causet::NoInterpolant::Reason::PreconditionViolated) {
          ++precondition;
        } else {
          ++gaps;
          if (failures.size() < 8) {
            failures.push_back({{"inner", io::ids_to_json(inner.span)}, {"outer", io::ids_to_json(outer.span)}});
          }
        }
      }
    }
  }
  Outcome o;
  o.holds = gaps == 0 && precondition == 0;
  o.details = {{"pairs", pairs}, {"succeeded", ok}, {"precondition_violations", precondition}, {"gaps", gaps},
               {"shared", f.shared.size()}, {"gap_examples", failures}};
  return o;
}

// --- duality ----------------------------------------------------------------

Outcome check_net_axioms(const Context& ctx, const json& params, std::mt19937_64& rng) {
  const auto fam = distinct(family_param(ctx, params, rng));
  Outcome o;
  o.holds = duality::check_net_axioms(ctx.c, fam);
  o.details = {{"family", fam.size()}};
  return o;
}

Outcome check_commutant(const Context& ctx, const json& params, std::mt19937_64& rng) {
  const auto fam = distinct(family_param(ctx, params, rng));
  const std::size_t n = ctx.c.size();
  std::size_t failures = 0;
  for (const PointSet& r : fam) {
    const auto a = duality::algebra_of_region(ctx.c, r);
    const auto ac = duality::commutant(a);
    if (a.dim_log() + ac.dim_log() != 2 * n || !(duality::commutant(ac) == a)) ++failures;
    if (!(ac == duality::algebra_of_sites(n, r.complement()))) ++failures;
  }
  // Random supported spans.
  const std::size_t spans = params.value("random_spans", std::size_t{50});
  std::bernoulli_distribution coin(0.5);
  for (std::size_t k = 0; k < spans && n > 0; ++k) {
    std::vector<BitSet> gens;
    const std::size_t count = 1 + rng() % (2 * n);
    for (std::size_t g = 0; g < count; ++g) {
      BitSet v(2 * n);
      for (std::size_t i = 0; i < 2 * n; ++i) v.set(i, coin(rng));
      gens.push_back(std::move(v));
    }
    const auto a = duality::AlgebraBasis::span(n, gens);
    const auto ac = duality::commutant(a);
    if (a.dim_log() + ac.dim_log() != 2 * n || !(duality::commutant(ac) == a)) ++failures;
  }
  Outcome o;
  o.holds = failures == 0;
  o.details = {{"regions", fam.size()}, {"random_spans", spans}, {"failures", failures}};
  return o;
}

Outcome check_intersect(const Context& ctx, const json& params, std::mt19937_64& rng) {
  const auto fam = distinct(family_param(ctx, params, rng));
  const std::size_t n = ctx.c.size();
  std::size_t failures = 0;
  std::size_t pairs = 0;
  const std::size_t limit = std::min<std::size_t>(fam.size(), 40);
  for (std::size_t i = 0; i < limit; ++i) {
    for (std::size_t j = i; j < limit; ++j) {
      ++pairs;
      const auto a = duality::algebra_of_region(ctx.c, fam[i]);
      const auto b = duality::algebra_of_region(ctx.c, fam[j]);
      if (!(duality::intersect(a, b) == duality::algebra_of_sites(n, fam[i] & fam[j]))) ++failures;
      const auto lhs = duality::intersect(duality::commutant(a), duality::commutant(b));
      if (!(lhs == duality::commutant(duality::sum(a, b)))) ++failures;
    }
  }
  Outcome o;
  o.holds = failures == 0;
  o.details = {{"pairs", pairs}, {"failures", failures}};
  return o;
}

std::vector<PointSet> d1_candidates(const Context& ctx, const json& params, const std::vector<PointSet>& fam) {
  if (params.contains("d1")) return {io::ids_from_json(params["d1"], ctx.c.size())};
  const std::size_t limit = params.value("max_d1", std::size_t{64});
  std::vector<PointSet> out(fam.begin(), fam.begin() + static_cast<std::ptrdiff_t>(std::min(limit, fam.size())));
  return out;
}

Outcome check_haag(const Context& ctx, const json& params, std::mt19937_64& rng) {
  const auto fam = distinct(family_param(ctx, params, rng));
  std::size_t holds = 0;
  std::size_t empty = 0;
  json failures = json::array();
  const auto d1s = d1_candidates(ctx, params, fam);
  for (const PointSet& d1 : d1s) {
    const auto r = duality::haag_duality_check(ctx.c, d1, fam);
    if (r.empty_family) ++empty;
    if (r.holds) {
      ++holds;
    } else if (failures.size() < 4) {
      failures.push_back({{"d1", io::ids_to_json(d1)}, {"lhs_dim", r.lhs.dim_log()}, {"rhs_dim", r.rhs.dim_log()},
                          {"witnesses", pauli_labels(r.witnesses)}});
    }
  }
  Outcome o;
  o.holds = !d1s.empty() && holds == d1s.size();
  o.details = {{"d1_checked", d1s.size()}, {"holds", holds}, {"empty_family", empty}, {"failures", failures}};
  return o;
}

Outcome check_covering(const Context& ctx, const json& params, std::mt19937_64& rng) {
  const auto fam = distinct(family_param(ctx, params, rng));
  std::size_t disagreements = 0;
  std::size_t holds = 0;
  const auto d1s = d1_candidates(ctx, params, fam);
  for (const PointSet& d1 : d1s) {
    const bool algebraic = duality::haag_duality_check(ctx.c, d1, fam).holds;
    const bool covering = duality::covering_oracle(ctx.c, d1, fam);
    if (algebraic != covering) ++disagreements;
    if (covering) ++holds;
  }
  Outcome o;
  o.holds = disagreements == 0;
  o.details = {{"d1_checked", d1s.size()}, {"haag_holds", holds}, {"disagreements", disagreements}};
  return o;
}

Outcome check_punctured(const Context& ctx, const json& params, std::mt19937_64& rng) {
  const std::size_t p = point_param(ctx, params);
  const std::string mode_name = params.value("mode", std::string("excised"));
  if (mode_name != "ambient" && mode_name != "excised") fail(ErrorCode::InvalidArgument, "mode must be ambient or excised");
  const auto mode = mode_name == "ambient" ? duality::PuncturedMode::Ambient : duality::PuncturedMode::Excised;
  json fparams = params;
  if (!fparams.contains("family")) fparams["family"] = "fam_a";
  const auto fam = distinct(family_param(ctx, fparams, rng));
  const PointSet shadow = causet::causal_hull(ctx.c, PointSet(ctx.c.size(), {p}));
  std::size_t checked = 0;
  std::size_t holds = 0;
  std::size_t witness_in_shadow = 0;
  // Ambient mode must fail whenever J(p) has points outside J(D1) (p itself
  // always qualifies), with a witness supported there.
  std::size_t unexplained_passes = 0;
  std::size_t failures_without_shadow_witness = 0;
  json failures = json::array();
  for (const PointSet& d1 : d1_candidates(ctx, fparams, fam)) {
    if (d1.intersects(shadow)) continue;
    ++checked;
    const auto r = duality::punctured_hd_check(ctx.c, d1, p, fam, mode);
    const bool shadow_outside = (shadow - causet::causal_hull(ctx.c, d1)).any();
    if (r.holds) {
      ++holds;
      if (mode == duality::PuncturedMode::Ambient && shadow_outside) ++unexplained_passes;
      continue;
    }
    if (r.witness_in_shadow) {
      ++witness_in_shadow;
    } else if (mode == duality::PuncturedMode::Ambient) {
      ++failures_without_shadow_witness;
    }
    if (failures.size() < 4) {
      json shadow_witnesses = json::array();
      for (const auto& w : r.witnesses) {
        if (w.support().intersects(shadow) && shadow_witnesses.size() < 4) shadow_witnesses.push_back(w.label());
      }
      failures.push_back({{"d1", io::ids_to_json(d1)}, {"witnesses", pauli_labels(r.witnesses)},
                          {"shadow_witnesses", shadow_witnesses}, {"empty_family", r.empty_family}});
    }
  }
  Outcome o;
  o.holds = checked > 0 && holds == checked;
  o.details = {{"mode", mode_name},
               {"p", p},
               {"shadow", io::ids_to_json(shadow)},
               {"d1_checked", checked},
               {"holds", holds},
               {"witness_in_shadow", witness_in_shadow},
               {"unexplained_passes", unexplained_passes},
               {"failures_without_shadow_witness", failures_without_shadow_witness},
               {"failures", failures}};
  return o;
}

Outcome check_local_definiteness(const Context& ctx, const json& params, std::mt19937_64& rng) {
  const std::size_t p = point_param(ctx, params);
  const auto fam = distinct(family_param(ctx, params, rng));
  const auto r = duality::local_definiteness_check(ctx.c, p, fam);
  Outcome o;
  o.holds = r.minimal;
  o.details = {{"p", p}, {"containing", r.containing}, {"intersection_dim", r.intersection.dim_log()},
               {"floor_dim", r.floor.dim_log()}};
  return o;
}

Outcome check_outer_regularity(const Context& ctx, const json& params, std::mt19937_64& rng) {
  const auto fam = distinct(family_param(ctx, params, rng));
  std::size_t checked = 0;
  std::size_t holds = 0;
  std::size_t floor_matches = 0;
  for (const PointSet& d1 : d1_candidates(ctx, params, fam)) {
    try {
      const auto r = duality::outer_regularity_check(ctx.c, d1, fam, params.value("buffer_steps", 1));
      ++checked;
      if (r.holds) ++holds;
      if (r.matches_floor) ++floor_matches;
    } catch (const LabError& e) {
      if (e.code() != ErrorCode::NoSuperset) throw;
    }
  }
  Outcome o;
  o.holds = checked > 0 && holds == checked;
  o.details = {{"d1_checked", checked}, {"holds", holds}, {"matches_floor", floor_matches}};
  return o;
}

Outcome check_generation(const Context& ctx, const json&, std::mt19937_64& rng) {
  causet::FamilyOptions opts;
  opts.sample_budget = ctx.samples;
  opts.seed = rng();
  const auto r = duality::generation_check(ctx.c, opts);
  Outcome o;
  o.holds = r.holds;
  o.details = {{"regions", r.regions}, {"covered", r.covered}};
  return o;
}

Outcome check_bridge(const Context& ctx, const json& params, std::mt19937_64& rng) {
  if (!ctx.punctured) fail(ErrorCode::InvalidArgument, "no marked point for punctured families");
  const auto& f = *ctx.punctured;
  const std::size_t p = f.p;
  std::vector<DiamondSpec> fam_b = f.fam_b;
  std::size_t pruned = 0;
  if (params.contains("prune")) {
    // Adversarial famB: drop members at random.
    const double fraction = params["prune"].get<double>();
    std::bernoulli_distribution drop(fraction);
    std::vector<DiamondSpec> kept;
    for (auto& d : fam_b) {
      if (drop(rng)) {
        ++pruned;
      } else {
        kept.push_back(std::move(d));
      }
    }
    fam_b = std::move(kept);
  }
  const auto shared = duality::shared_diamonds(f.fam_a, fam_b);
  const auto r = duality::cofinality_bridge(ctx.c, p, f.fam_a, fam_b, shared);
  json discrepancies = json::array();
  for (const auto& e : r.discrepancies) {
    if (discrepancies.size() >= 4) break;
    json ex = json::array();
    for (const auto& x : e.explanations) {
      ex.push_back({{"reason", x.reason == causet::NoInterpolant::Reason::Gap ? "gap" : "precondition"},
                    {"witness", x.witness ? json(*x.witness) : json()}});
    }
    discrepancies.push_back({{"d1", io::ids_to_json(e.d1)}, {"rhs_a_dim", e.rhs_a.dim_log()},
                             {"rhs_b_dim", e.rhs_b.dim_log()}, {"explanations", ex}});
  }
  Outcome o;
  o.holds = r.all_equal && !r.unexplained;
  if (params.contains("prune")) o.holds = !r.unexplained;
  o.details = {{"p", p},
               {"fam_a", f.fam_a.size()},
               {"fam_b", fam_b.size()},
               {"pruned", pruned},
               {"shared", r.shared},
               {"compared", r.compared},
               {"all_equal", r.all_equal},
               {"unexplained", r.unexplained},
               {"interpolation_attempts", r.interpolation_attempts},
               {"interpolation_failures", r.interpolation_failures},
               {"discrepancy_count", r.discrepancies.size()},
               {"discrepancies", discrepancies}};
  return o;
}

Outcome check_punctured_sweep(const Context& ctx, const json& params, std::mt19937_64& rng) {
  // Sweep the points of a slice (pairwise causally disjoint, hence a
  // disjointness-connected chain) with excised-mode punctured duality.
  const auto fam = distinct(family_param(ctx, params, rng));
  const std::size_t idx = params.value("slice", std::size_t{0});
  if (idx >= ctx.slices.size()) fail(ErrorCode::InvalidArgument, "params.slice out of range");
  const PointSet sweep = ctx.slices[idx].points;
  bool all_punctured = true;
  std::vector<PointSet> d1s;
  sweep.for_each([&](std::size_t p) {
    const PointSet shadow = causet::causal_hull(ctx.c, PointSet(ctx.c.size(), {p}));
    for (const PointSet& d1 : fam) {
      if (d1.intersects(shadow)) continue;
      d1s.push_back(d1);
      if (!duality::punctured_hd_check(ctx.c, d1, p, fam, duality::PuncturedMode::Excised).holds) all_punctured = false;
    }
  });
  d1s = distinct(std::move(d1s));
  bool all_haag = true;
  for (const PointSet& d1 : d1s) all_haag = all_haag && duality::haag_duality_check(ctx.c, d1, fam).holds;
  Outcome o;
  o.holds = !all_punctured || all_haag;
  o.details = {{"sweep", io::ids_to_json(sweep)}, {"d1", d1s.size()}, {"punctured_all", all_punctured},
               {"haag_all", all_haag}};
  return o;
}

}  // namespace

const std::map<std::string, CheckInfo>& check_registry() {
  static const std::map<std::string, CheckInfo> registry{
      {"causal_relation", {check_causal_relation, {"causal_relation"}}},
      {"excision_membership", {check_excision_membership, {"excision_membership"}}},
      {"surface_membership_co", {check_surface_membership, {"surface_membership_co"}}},
      {"diamond_membership", {check_diamond_membership, {"diamond_membership"}}},
      {"causally_disjoint_cones", {check_disjoint_cones, {"causally_disjoint_cones"}}},
      {"deform_surface", {check_deform_surface, {"deform_surface_through_point"}}},
      {"squeeze_conditions", {check_squeeze, {"check_squeeze_conditions"}}},
      {"interpolate_cone", {check_interpolate_cone, {"interpolate_cone"}}},
      {"order_axioms", {check_order_axioms, {"sprinkle", "transitive_closure", "transitive_reduction"}}},
      {"future", {check_future, {"future", "past"}}},
      {"domain_of_dependence", {check_domain_of_dependence, {"discrete_domain_of_dependence"}}},
      {"cauchy_slices", {check_cauchy_slices, {"is_cauchy_slice"}}},
      {"excise", {check_excise, {"excise"}, true}},
      {"slice_excision", {check_slice_excision, {"prop33_check"}}},
      {"convex_regions", {check_convex_regions, {"convex_region_family"}}},
      {"excised_regions", {check_excised_regions, {"eq35_check"}}},
      {"causally_disjoint", {check_causally_disjoint, {"causally_disjoint"}}},
      {"diamonds", {check_diamonds, {"diamonds_on_slice"}}},
      {"slice_through_point", {check_slice_through_point, {"slice_through_point"}, true}},
      {"interpolate_diamond", {check_interpolate_diamond, {"interpolate_diamond"}, true}},
      {"net_axioms", {check_net_axioms, {"algebra_of_region"}}},
      {"commutant", {check_commutant, {"commutant"}}},
      {"intersect", {check_intersect, {"intersect"}}},
      {"haag", {check_haag, {"haag_duality_check"}}},
      {"covering_oracle", {check_covering, {"covering_oracle", "haag_duality_check"}}},
      {"punctured_hd", {check_punctured, {"punctured_hd_check"}, true}},
      {"local_definiteness", {check_local_definiteness, {"local_definiteness_check"}, true}},
      {"outer_regularity", {check_outer_regularity, {"outer_regularity_check"}}},
      {"generation", {check_generation, {"generation_check"}}},
      {"bridge", {check_bridge, {"cofinality_bridge"}, true}},
      {"punctured_sweep", {check_punctured_sweep, {"punctured_hd_check", "haag_duality_check"}}},
  };
  return registry;
}

}  // namespace clab::harness
