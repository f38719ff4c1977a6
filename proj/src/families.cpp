#include "causal_lab/families.hpp"

#include <algorithm>
#include <set>

namespace clab::causet {

namespace {

void push_unique(std::vector<Slice>& slices, Slice s) {
  for (const Slice& t : slices) {
    if (t.points == s.points) return;
  }
  slices.push_back(std::move(s));
}

std::vector<PointSet> bases_within(const std::set<PointSet>& bases, const PointSet& slice) {
  std::vector<PointSet> out;
  for (const PointSet& b : bases) {
    if (b.is_subset_of(slice)) out.push_back(b);
  }
  return out;
}

void dedupe_by_span(std::vector<DiamondSpec>& ds) {
  std::stable_sort(ds.begin(), ds.end(), [](const DiamondSpec& x, const DiamondSpec& y) {
    const std::size_t cx = x.span.count();
    const std::size_t cy = y.span.count();
    if (cx != cy) return cx < cy;
    if (x.span != y.span) return x.span < y.span;
    return x.base < y.base;
  });
  std::vector<DiamondSpec> out;
  for (DiamondSpec& d : ds) {
    if (out.empty() || out.back().span != d.span) out.push_back(std::move(d));
  }
  ds = std::move(out);
}

}  // namespace

std::vector<PointSet> spans_of(const std::vector<DiamondSpec>& diamonds) {
  std::vector<PointSet> out;
  out.reserve(diamonds.size());
  for (const DiamondSpec& d : diamonds) out.push_back(d.span);
  return out;
}

std::vector<DiamondSpec> level_diamonds(const Causet& c, const FamilySpec& spec) {
  std::vector<Slice> slices;
  for (double t : spec.levels) {
    if (auto s = level_slice(c, t)) push_unique(slices, std::move(*s));
  }
  std::vector<DiamondSpec> out;
  for (const Slice& a : slices) {
    auto ds = diamonds_on_slice(c, a, spec.diamonds);
    out.insert(out.end(), ds.begin(), ds.end());
  }
  dedupe_by_span(out);
  return out;
}

PuncturedFamilies build_punctured_families(const Causet& c, std::size_t p, const FamilySpec& spec) {
  const Excision e = excise(c, p);
  PuncturedFamilies out;
  out.p = p;

  auto add_through = [&](const Slice& s) {
    push_unique(out.ambient_slices, s);
    PointSet rest = s.points;
    rest.reset(p);
    push_unique(out.excision_slices, make_slice(e.causet, e.from_ambient_set(rest)));
  };

  std::vector<Slice> levels;
  for (double t : spec.levels) {
    if (auto s = level_slice(c, t)) push_unique(levels, std::move(*s));
  }
  for (const Slice& a : levels) {
    ++out.through_point_attempts;
    const SliceThroughPoint r = slice_through_point(c, a, p);
    if (r.cauchy) {
      ++out.through_point_cauchy;
      add_through(r.slice);
    }
    if (r.cauchy || !spec.p_compatible) push_unique(out.ambient_slices, a);
  }

  // Down-sets below p, padded with everything under each level outside
  // J+(p); p stays maximal because its strict future is forbidden.
  const PointSet above = future_of(c, p, Mode::Strict);
  const PointSet below = past_of(c, p, Mode::Reflexive);
  std::vector<PointSet> seeds{below};
  if (c.has_coords()) {
    for (double t : spec.levels) {
      PointSet s = c.none();
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.coords()[i].t < t && !above.test(i)) s.set(i);
      }
      seeds.push_back(past(c, s, Mode::Reflexive) | below);
    }
  }
  for (const PointSet& seed : seeds) {
    ++out.through_point_attempts;
    const auto s = cauchy_slice_from_down_set(c, seed, above);
    if (!s || !s->points.test(p)) continue;
    ++out.through_point_cauchy;
    add_through(*s);
  }

  for (double t : spec.levels) {
    if (auto s = level_slice(e.causet, t)) push_unique(out.excision_slices, std::move(*s));
  }
  for (const Slice& b : std::vector<Slice>(out.excision_slices)) {
    PointSet joined = e.to_ambient_set(b.points, c.size());
    joined.set(p);
    if (is_cauchy_slice(c, joined)) push_unique(out.ambient_slices, make_slice(c, joined));
  }

  std::set<PointSet> bases;
  for (const Slice& a : out.ambient_slices) {
    for (const DiamondSpec& d : diamonds_on_slice(c, a, spec.diamonds)) bases.insert(d.base);
  }
  for (const Slice& b : out.excision_slices) {
    for (const DiamondSpec& d : diamonds_on_slice(e.causet, b, spec.diamonds)) {
      bases.insert(e.to_ambient_set(d.base, c.size()));
    }
  }

  DiamondOptions opts = spec.diamonds;
  for (const Slice& a : out.ambient_slices) {
    opts.extra_bases = bases_within(bases, a.points);
    auto ds = diamonds_on_slice(c, a, opts);
    out.ambient.insert(out.ambient.end(), ds.begin(), ds.end());
  }
  for (const Slice& b : out.excision_slices) {
    const PointSet b_ambient = e.to_ambient_set(b.points, c.size());
    opts.extra_bases.clear();
    for (const PointSet& base : bases_within(bases, b_ambient)) opts.extra_bases.push_back(e.from_ambient_set(base));
    for (const DiamondSpec& d : diamonds_on_slice(e.causet, b, opts)) {
      out.fam_b.push_back({Slice{b_ambient, b.maximal}, e.to_ambient_set(d.base, c.size()),
                           e.to_ambient_set(d.span, c.size())});
    }
  }
  dedupe_by_span(out.ambient);
  dedupe_by_span(out.fam_b);

  PointSet single = c.none();
  single.set(p);
  for (const DiamondSpec& d : out.ambient) {
    if (causally_disjoint(c, d.span, single)) out.fam_a.push_back(d);
  }
  std::set<PointSet> spans_b;
  for (const DiamondSpec& d : out.fam_b) spans_b.insert(d.span);
  for (const DiamondSpec& d : out.fam_a) {
    if (spans_b.count(d.span) != 0) out.shared.push_back(d);
  }
  return out;
}

}  // namespace clab::causet
