#include "causal_lab/regions.hpp"

#include <algorithm>
#include <set>

#include "causal_lab/errors.hpp"

namespace clab::causet {

std::string_view to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::Convex: return "convex";
    case RegionKind::Diamond: return "diamond";
    case RegionKind::Arbitrary: return "arbitrary";
  }
  return "arbitrary";
}

bool is_order_convex(const Causet& c, const PointSet& s) {
  return (future(c, s, Mode::Reflexive) & past(c, s, Mode::Reflexive)) == s;
}

bool is_comparability_connected(const Causet& c, const PointSet& s) {
  if (s.none()) return false;
  PointSet seen(s.size());
  std::vector<std::size_t> stack{s.first()};
  seen.set(s.first());
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    PointSet next = (c.order().row(x) | c.past_order().row(x)) & s;
    next.subtract(seen);
    next.for_each([&](std::size_t y) {
      seen.set(y);
      stack.push_back(y);
    });
  }
  return seen == s;
}

bool is_convex_region(const Causet& c, const PointSet& s) {
  return s.any() && is_order_convex(c, s) && is_comparability_connected(c, s);
}

Region make_region(const Causet& c, const PointSet& points, RegionKind kind) {
  if (c.empty()) fail(ErrorCode::InvalidArgument, "regions need a nonempty causet");
  if (points.size() != c.size()) fail(ErrorCode::InvalidArgument, "region does not match the causet size");
  if (kind == RegionKind::Convex && !is_convex_region(c, points)) {
    fail(ErrorCode::InvalidArgument, "region is not a nonempty connected order-convex set");
  }
  if (kind == RegionKind::Diamond && !is_order_convex(c, points)) {
    fail(ErrorCode::InvalidArgument, "diamond region is not order-convex");
  }
  return {points, kind};
}

bool causally_disjoint(const Causet& c, const PointSet& r1, const PointSet& r2) {
  return !causal_hull(c, r1).intersects(r2);
}

PointSet hasse_buffer(const Causet& c, const PointSet& s, int steps) {
  PointSet out = s;
  for (int k = 0; k < steps; ++k) {
    PointSet grown = out;
    out.for_each([&](std::size_t x) { grown |= c.hasse().row(x) | c.hasse_past().row(x); });
    out = std::move(grown);
  }
  return out;
}

// ---------------------------------------------------------------------------

PointSet sample_convex_region(const Causet& c, const PointSet& pool, std::mt19937_64& rng) {
  const std::vector<std::size_t> ids = pool.to_vector();
  if (ids.empty()) return c.none();
  std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
  const std::size_t k = 1 + std::uniform_int_distribution<std::size_t>(0, 2)(rng);
  PointSet seeds = c.none();
  const std::size_t first = ids[pick(rng)];
  seeds.set(first);
  for (std::size_t i = 1; i < k; ++i) seeds.set(ids[pick(rng)]);
  const PointSet hull = future(c, seeds, Mode::Reflexive) & past(c, seeds, Mode::Reflexive);
  // Comparability component of the first seed; components of an order-convex
  // set are order-convex.
  PointSet comp = c.none();
  std::vector<std::size_t> stack{first};
  comp.set(first);
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    PointSet next = (c.order().row(x) | c.past_order().row(x)) & hull;
    next.subtract(comp);
    next.for_each([&](std::size_t y) {
      comp.set(y);
      stack.push_back(y);
    });
  }
  return comp;
}

RegionFamily convex_region_family(const Causet& c, const FamilyOptions& options) {
  RegionFamily out;
  const std::size_t n = c.size();
  if (n == 0) {
    out.exhaustive = true;
    return out;
  }
  if (n <= options.exhaustive_limit) {
    out.exhaustive = true;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      PointSet s(n);
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i) & 1u) s.set(i);
      }
      if (is_convex_region(c, s)) out.regions.push_back(std::move(s));
    }
    std::sort(out.regions.begin(), out.regions.end());
    return out;
  }
  std::mt19937_64 rng(options.seed);
  std::set<PointSet> seen;
  const PointSet pool = c.all();
  for (std::size_t k = 0; k < options.sample_budget; ++k) seen.insert(sample_convex_region(c, pool, rng));
  out.samples = options.sample_budget;
  out.regions.assign(seen.begin(), seen.end());
  return out;
}

Eq35Report eq35_check(const Causet& c, std::size_t p, const FamilyOptions& options) {
  if (p >= c.size()) fail(ErrorCode::InvalidArgument, "point out of range");
  const Excision e = excise(c, p);
  PointSet single = c.none();
  single.set(p);
  Eq35Report out;

  if (c.size() <= options.exhaustive_limit) {
    out.exhaustive = true;
    std::vector<PointSet> f1;
    for (const PointSet& r : convex_region_family(e.causet, options).regions) {
      f1.push_back(e.to_ambient_set(r, c.size()));
    }
    std::sort(f1.begin(), f1.end());
    std::vector<PointSet> f2;
    for (const PointSet& r : convex_region_family(c, options).regions) {
      if (causally_disjoint(c, r, single)) f2.push_back(r);
    }
    out.excised_family = f1.size();
    out.ambient_family = f2.size();
    std::set_difference(f1.begin(), f1.end(), f2.begin(), f2.end(), std::back_inserter(out.only_excised));
    std::set_difference(f2.begin(), f2.end(), f1.begin(), f1.end(), std::back_inserter(out.only_ambient));
    out.equal = out.only_excised.empty() && out.only_ambient.empty();
    return out;
  }

  std::mt19937_64 rng(options.seed);
  // Excision side: regions drawn from the excised order must be ambient
  // convex regions disjoint from p.
  if (!e.causet.empty()) {
    const PointSet pool = e.causet.all();
    for (std::size_t k = 0; k < options.sample_budget; ++k) {
      const PointSet r = e.to_ambient_set(sample_convex_region(e.causet, pool, rng), c.size());
      ++out.excised_family;
      if (!is_convex_region(c, r) || !causally_disjoint(c, r, single)) out.only_excised.push_back(r);
    }
  }
  // Ambient side: convex regions disjoint from p must be convex regions of
  // the excision.
  const PointSet outside = causal_hull(c, single).complement();
  if (outside.any()) {
    for (std::size_t k = 0; k < options.sample_budget; ++k) {
      const PointSet r = sample_convex_region(c, outside, rng);
      if (!causally_disjoint(c, r, single)) continue;
      ++out.ambient_family;
      bool ok = true;
      r.for_each([&](std::size_t i) { ok = ok && e.from_ambient[i] != Excision::npos; });
      if (!ok || !is_convex_region(e.causet, e.from_ambient_set(r))) out.only_ambient.push_back(r);
    }
  }
  out.equal = out.only_excised.empty() && out.only_ambient.empty();
  return out;
}

// ---------------------------------------------------------------------------

std::optional<DiamondSpec> make_diamond(const Causet& c, const Slice& slice, const PointSet& base) {
  if (base.none() || !base.is_subset_of(slice.points)) {
    fail(ErrorCode::InvalidArgument, "diamond base must be a nonempty subset of the slice");
  }
  PointSet span = domain_of_dependence(c, base);
  if (!is_comparability_connected(c, span)) return std::nullopt;
  return DiamondSpec{slice, base, std::move(span)};
}

std::vector<DiamondSpec> diamonds_on_slice(const Causet& c, const Slice& a, const DiamondOptions& options) {
  const std::vector<std::size_t> pts = a.points.to_vector();
  std::set<PointSet> bases;
  const std::size_t m = pts.size();
  if (m <= options.exhaustive_limit) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << m); ++mask) {
      PointSet b = c.none();
      for (std::size_t i = 0; i < m; ++i) {
        if ((mask >> i) & 1u) b.set(pts[i]);
      }
      bases.insert(std::move(b));
    }
  } else {
    for (std::size_t x : pts) {
      PointSet b = c.none();
      b.set(x);
      bases.insert(std::move(b));
    }
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, m - 1);
    std::uniform_int_distribution<std::size_t> size(2, std::max<std::size_t>(2, std::min(m, options.max_base)));
    const int dim = c.dim();
    for (std::size_t k = 0; k < options.sample_budget; ++k) {
      const std::size_t center = pts[pick(rng)];
      const std::size_t want = size(rng);
      std::vector<std::size_t> near = pts;
      if (c.has_coords()) {
        const auto& y = c.coords()[center].x;
        std::stable_sort(near.begin(), near.end(), [&](std::size_t u, std::size_t v) {
          return continuum::spatial_distance(c.coords()[u].x, y, dim) <
                 continuum::spatial_distance(c.coords()[v].x, y, dim);
        });
      } else {
        std::shuffle(near.begin(), near.end(), rng);
      }
      PointSet b = c.none();
      for (std::size_t i = 0; i < want && i < near.size(); ++i) b.set(near[i]);
      bases.insert(std::move(b));
    }
  }
  for (const PointSet& b : options.extra_bases) {
    if (b.any() && b.is_subset_of(a.points)) bases.insert(b);
  }

  std::vector<DiamondSpec> out;
  for (const PointSet& b : bases) {
    if (auto d = make_diamond(c, a, b)) out.push_back(std::move(*d));
  }
  std::stable_sort(out.begin(), out.end(), [](const DiamondSpec& x, const DiamondSpec& y) {
    const std::size_t cx = x.span.count();
    const std::size_t cy = y.span.count();
    return cx != cy ? cx < cy : x.base < y.base;
  });
  return out;
}

// ---------------------------------------------------------------------------

InterpolationResult interpolate_diamond(const Causet& c, const DiamondSpec& inner, const PointSet& outer,
                                        const std::vector<DiamondSpec>& shared_family, int buffer_steps) {
  InterpolationResult out;
  const PointSet escaped = hasse_buffer(c, inner.span, buffer_steps) - outer;
  if (escaped.any()) {
    out.failure = NoInterpolant{NoInterpolant::Reason::PreconditionViolated, escaped.first()};
    return out;
  }
  const DiamondSpec* best = nullptr;
  for (const DiamondSpec& d : shared_family) {
    if (!inner.span.is_subset_of(d.span) || !d.span.is_subset_of(outer)) continue;
    if (best == nullptr) {
      best = &d;
      continue;
    }
    const std::size_t cd = d.span.count();
    const std::size_t cb = best->span.count();
    if (cd < cb || (cd == cb && d.base < best->base)) best = &d;
  }
  if (best != nullptr) {
    out.diamond = *best;
  } else {
    out.failure = NoInterpolant{NoInterpolant::Reason::Gap, std::nullopt};
  }
  return out;
}

InterpolationResult interpolate_diamond(const Causet& c, const DiamondSpec& inner, const DiamondSpec& outer,
                                        const std::vector<DiamondSpec>& shared_family, int buffer_steps) {
  return interpolate_diamond(c, inner, outer.span, shared_family, buffer_steps);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> chain_witness(const Causet& c, const PointSet& s) {
  const PointSet missing = domain_of_dependence(c, s).complement();
  if (missing.none()) return {};
  return uncovered_chain(c, s, missing.first());
}

}  // namespace

Prop33Report prop33_check(const Causet& c, const PointSet& a, std::size_t p,
                          const std::optional<PointSet>& excision_slice) {
  if (p >= c.size() || a.size() != c.size() || !a.test(p)) {
    fail(ErrorCode::PreconditionFailure, "p must belong to the slice");
  }
  if (!is_maximal_antichain(c, a)) fail(ErrorCode::PreconditionFailure, "slice is not a maximal antichain");
  if (!is_cauchy_slice(c, a)) fail(ErrorCode::PreconditionFailure, "slice is not Cauchy");

  Prop33Report out;
  const Excision e = excise(c, p);
  PointSet rest = a;
  rest.reset(p);
  const PointSet rest_e = e.from_ambient_set(rest);
  out.forward = is_cauchy_slice(e.causet, rest_e);
  if (!out.forward) {
    for (std::size_t i : chain_witness(e.causet, rest_e)) out.forward_witness.push_back(e.to_ambient[i]);
  }

  PointSet slice_e = rest_e;
  if (excision_slice) {
    if (excision_slice->size() != e.causet.size() || !is_antichain(e.causet, *excision_slice) ||
        !is_cauchy_slice(e.causet, *excision_slice)) {
      fail(ErrorCode::PreconditionFailure, "supplied slice is not a Cauchy slice of the excision");
    }
    slice_e = *excision_slice;
    out.converse_from_supplied = true;
  }
  PointSet joined = e.to_ambient_set(slice_e, c.size());
  joined.set(p);
  if (!is_antichain(c, joined)) {
    joined.for_each([&](std::size_t i) {
      if (out.converse_witness.empty() && c.order().row(i).intersects(joined)) {
        out.converse_witness = {i, (c.order().row(i) & joined).first()};
      }
    });
    return out;
  }
  out.converse_witness = chain_witness(c, joined);
  out.converse = out.converse_witness.empty();
  return out;
}

}  // namespace clab::causet
