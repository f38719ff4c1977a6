#include "causal_lab/causet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "causal_lab/errors.hpp"

namespace clab::causet {

using continuum::interval;

BitMatrix transitive_closure(const BitMatrix& raw) {
  const std::size_t n = raw.size();
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (raw.test(i, i)) fail(ErrorCode::CycleDetected, "relation has a loop at " + std::to_string(i));
    raw.row(i).for_each([&](std::size_t j) { ++indegree[j]; });
  }
  std::vector<std::size_t> topo;
  topo.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) topo.push_back(i);
  }
  for (std::size_t head = 0; head < topo.size(); ++head) {
    raw.row(topo[head]).for_each([&](std::size_t j) {
      if (--indegree[j] == 0) topo.push_back(j);
    });
  }
  if (topo.size() != n) fail(ErrorCode::CycleDetected, "relation contains a cycle");

  BitMatrix closed(n);
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    BitSet& row = closed.row(*it);
    row = raw.row(*it);
    raw.row(*it).for_each([&](std::size_t j) { row |= closed.row(j); });
  }
  return closed;
}

BitMatrix transitive_reduction(const BitMatrix& order) {
  const std::size_t n = order.size();
  BitMatrix hasse(n);
  for (std::size_t i = 0; i < n; ++i) {
    BitSet covers = order.row(i);
    BitSet above(n);
    order.row(i).for_each([&](std::size_t k) { above |= order.row(k); });
    hasse.row(i) = covers.subtract(above);
  }
  return hasse;
}

// ---------------------------------------------------------------------------

Causet Causet::from_relation(const BitMatrix& raw, std::vector<Event> coords, int dim, std::uint64_t seed) {
  if (!coords.empty() && coords.size() != raw.size()) fail(ErrorCode::InvalidArgument, "coords size mismatch");
  Causet c;
  c.order_ = transitive_closure(raw);
  c.coords_ = std::move(coords);
  c.dim_ = dim;
  c.seed_ = seed;
  c.finish();
  return c;
}

Causet Causet::from_order(BitMatrix order, std::vector<Event> coords, int dim, std::uint64_t seed) {
  if (!coords.empty() && coords.size() != order.size()) fail(ErrorCode::InvalidArgument, "coords size mismatch");
  const std::size_t n = order.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (order.test(i, i)) fail(ErrorCode::CycleDetected, "order is not irreflexive at " + std::to_string(i));
    bool transitive = true;
    order.row(i).for_each([&](std::size_t j) {
      if (!order.row(j).is_subset_of(order.row(i))) transitive = false;
    });
    if (!transitive) fail(ErrorCode::InvalidArgument, "order is not transitively closed");
  }
  Causet c;
  c.order_ = std::move(order);
  c.coords_ = std::move(coords);
  c.dim_ = dim;
  c.seed_ = seed;
  c.finish();
  for (std::size_t i = 0; i < n; ++i) {
    if (c.order_.row(i).intersects(c.past_.row(i))) fail(ErrorCode::CycleDetected, "order is not antisymmetric");
  }
  return c;
}

void Causet::finish() {
  const std::size_t n = order_.size();
  past_ = order_.transpose();
  hasse_ = transitive_reduction(order_);
  hasse_past_ = hasse_.transpose();
  // i < j implies past(i) is a strict subset of past(j).
  topo_.resize(n);
  std::iota(topo_.begin(), topo_.end(), std::size_t{0});
  std::vector<std::size_t> depth(n);
  for (std::size_t i = 0; i < n; ++i) depth[i] = past_.row(i).count();
  std::stable_sort(topo_.begin(), topo_.end(), [&](std::size_t a, std::size_t b) { return depth[a] < depth[b]; });
  past_boundary_ = PointSet(n);
  future_boundary_ = PointSet(n);
}

void Causet::set_boundary(PointSet past, PointSet future) {
  if (past.size() != size() || future.size() != size()) fail(ErrorCode::InvalidArgument, "boundary size mismatch");
  past_boundary_ = std::move(past);
  future_boundary_ = std::move(future);
}

bool Causet::check_axioms() const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (order_.test(i, i)) return false;
    if (order_.row(i).intersects(past_.row(i))) return false;
    bool transitive = true;
    order_.row(i).for_each([&](std::size_t j) {
      if (!order_.row(j).is_subset_of(order_.row(i))) transitive = false;
    });
    if (!transitive) return false;
  }
  return hasse_ == transitive_reduction(order_);
}

// ---------------------------------------------------------------------------

Causet sprinkle(const SpacetimeModel& model, double density, std::uint64_t seed, const SprinkleOptions& options) {
  if (!std::isfinite(density) || density < 0.0) fail(ErrorCode::InvalidArgument, "density must be finite and >= 0");
  const auto& w = model.window();
  const double expected = density * w.volume();
  if (expected > options.max_expected_points) {
    fail(ErrorCode::TooDense, "expected " + std::to_string(expected) + " points exceeds the configured maximum");
  }
  const int dim = model.dim();
  std::mt19937_64 rng(seed);
  std::size_t count = 0;
  if (expected > 0.0) count = std::poisson_distribution<std::size_t>(expected)(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Event> events;
  events.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Event e;
    e.t = w.t_lo + (w.t_hi - w.t_lo) * unit(rng);
    for (int a = 0; a < dim; ++a) e.x[a] = w.x_lo[a] + (w.x_hi[a] - w.x_lo[a]) * unit(rng);
    if (model.in_shadow(e)) continue;
    events.push_back(e);
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });

  // Causal segments between points outside J(p) never enter J(p), so the
  // excised order is the ambient order restricted to the surviving points.
  const std::size_t n = events.size();
  BitMatrix order(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (events[j].t > events[i].t && interval(events[i], events[j], dim) <= 0.0) order.set(i, j);
    }
  }
  return Causet::from_order(std::move(order), std::move(events), dim, seed);
}

Causet from_events(const SpacetimeModel& model, std::vector<Event> events, std::uint64_t seed) {
  const std::size_t n = events.size();
  for (const Event& e : events) {
    model.require_in_window(e);
    if (model.in_shadow(e)) fail(ErrorCode::InExcisedShadow, "event lies in the excised shadow");
  }
  BitMatrix raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && continuum::causally_precedes(model, events[i], events[j])) raw.set(i, j);
    }
  }
  const int dim = model.dim();
  return Causet::from_relation(raw, std::move(events), dim, seed);
}

// ---------------------------------------------------------------------------

namespace {

void require_size(const Causet& c, const PointSet& s) {
  if (s.size() != c.size()) fail(ErrorCode::InvalidArgument, "point set does not match the causet size");
}

PointSet spread(const BitMatrix& rows, const PointSet& s, Mode mode) {
  PointSet out(s.size());
  s.for_each([&](std::size_t i) { out |= rows.row(i); });
  if (mode == Mode::Reflexive) out |= s;
  return out;
}

}  // namespace

PointSet future(const Causet& c, const PointSet& s, Mode mode) {
  require_size(c, s);
  return spread(c.order(), s, mode);
}

PointSet past(const Causet& c, const PointSet& s, Mode mode) {
  require_size(c, s);
  return spread(c.past_order(), s, mode);
}

PointSet future_of(const Causet& c, std::size_t x, Mode mode) {
  PointSet out = c.order().row(x);
  if (mode == Mode::Reflexive) out.set(x);
  return out;
}

PointSet past_of(const Causet& c, std::size_t x, Mode mode) {
  PointSet out = c.past_order().row(x);
  if (mode == Mode::Reflexive) out.set(x);
  return out;
}

PointSet causal_hull(const Causet& c, const PointSet& s) {
  return future(c, s, Mode::Reflexive) | past(c, s, Mode::Reflexive);
}

PointSet dependence_future(const Causet& c, const PointSet& s) {
  require_size(c, s);
  PointSet in(c.size());
  for (std::size_t x : c.topological_order()) {
    const PointSet& preds = c.hasse_past().row(x);
    if (s.test(x) || (preds.any() && !c.past_boundary().test(x) && preds.is_subset_of(in))) in.set(x);
  }
  return in;
}

PointSet dependence_past(const Causet& c, const PointSet& s) {
  require_size(c, s);
  PointSet in(c.size());
  const auto& topo = c.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const std::size_t x = *it;
    const PointSet& succs = c.hasse().row(x);
    if (s.test(x) || (succs.any() && !c.future_boundary().test(x) && succs.is_subset_of(in))) in.set(x);
  }
  return in;
}

PointSet domain_of_dependence(const Causet& c, const PointSet& s) {
  return dependence_future(c, s) | dependence_past(c, s);
}

std::vector<std::size_t> uncovered_chain(const Causet& c, const PointSet& s, std::size_t x) {
  const PointSet dplus = dependence_future(c, s);
  const PointSet dminus = dependence_past(c, s);
  if (dplus.test(x) || dminus.test(x)) fail(ErrorCode::InvalidArgument, "point lies in the domain of dependence");

  std::vector<std::size_t> down;
  for (std::size_t y = x;;) {
    const PointSet& preds = c.hasse_past().row(y);
    if (preds.none() || c.past_boundary().test(y)) break;
    y = (preds - dplus).first();
    down.push_back(y);
  }
  std::vector<std::size_t> chain(down.rbegin(), down.rend());
  chain.push_back(x);
  for (std::size_t y = x;;) {
    const PointSet& succs = c.hasse().row(y);
    if (succs.none() || c.future_boundary().test(y)) break;
    y = (succs - dminus).first();
    chain.push_back(y);
  }
  return chain;
}

bool is_antichain(const Causet& c, const PointSet& s) {
  require_size(c, s);
  bool ok = true;
  s.for_each([&](std::size_t i) {
    if (c.order().row(i).intersects(s)) ok = false;
  });
  return ok;
}

bool is_maximal_antichain(const Causet& c, const PointSet& s) {
  return is_antichain(c, s) && causal_hull(c, s).count() == c.size();
}

Slice make_slice(const Causet& c, const PointSet& points) {
  if (!is_antichain(c, points)) fail(ErrorCode::NotAntichain, "slice points are not pairwise incomparable");
  return {points, causal_hull(c, points).count() == c.size()};
}

bool is_cauchy_slice(const Causet& c, const PointSet& a) {
  if (!is_antichain(c, a)) fail(ErrorCode::NotAntichain, "slice points are not pairwise incomparable");
  return domain_of_dependence(c, a).count() == c.size();
}

// ---------------------------------------------------------------------------

PointSet Excision::to_ambient_set(const PointSet& s, std::size_t ambient_size) const {
  PointSet out(ambient_size);
  s.for_each([&](std::size_t i) { out.set(to_ambient[i]); });
  return out;
}

PointSet Excision::from_ambient_set(const PointSet& s) const {
  PointSet out(to_ambient.size());
  s.for_each([&](std::size_t i) {
    if (from_ambient[i] == npos) fail(ErrorCode::InvalidArgument, "point set meets the excised shadow");
    out.set(from_ambient[i]);
  });
  return out;
}

Excision excise(const Causet& c, std::size_t p) {
  if (p >= c.size()) fail(ErrorCode::InvalidArgument, "excision point out of range");
  const PointSet shadow = future_of(c, p, Mode::Reflexive) | past_of(c, p, Mode::Reflexive);
  Excision out;
  out.excised_point = p;
  out.from_ambient.assign(c.size(), Excision::npos);
  (shadow.complement()).for_each([&](std::size_t i) {
    out.from_ambient[i] = out.to_ambient.size();
    out.to_ambient.push_back(i);
  });
  std::vector<Event> coords;
  if (c.has_coords()) {
    for (std::size_t i : out.to_ambient) coords.push_back(c.coords()[i]);
  }
  out.causet = Causet::from_order(c.order().induced(out.to_ambient), std::move(coords), c.dim(), c.seed());
  const std::size_t m = out.to_ambient.size();
  PointSet past_edge(m);
  PointSet future_edge(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = out.to_ambient[k];
    if (c.past_boundary().test(i) || c.hasse_past().row(i).intersects(shadow)) past_edge.set(k);
    if (c.future_boundary().test(i) || c.hasse().row(i).intersects(shadow)) future_edge.set(k);
  }
  out.causet.set_boundary(std::move(past_edge), std::move(future_edge));
  return out;
}

// ---------------------------------------------------------------------------

std::optional<Slice> cauchy_slice_from_down_set(const Causet& c, const PointSet& seed_down, const PointSet& forbidden) {
  const std::size_t n = c.size();
  PointSet minimal(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (c.hasse_past().row(i).none()) minimal.set(i);
  }
  PointSet low = past(c, seed_down | minimal | c.past_boundary(), Mode::Reflexive);
  PointSet top(n);
  while (true) {
    if (low.intersects(forbidden)) return std::nullopt;
    top.clear();
    low.for_each([&](std::size_t x) {
      if (!c.order().row(x).intersects(low)) top.set(x);
    });
    PointSet grow(n);
    (low - top).for_each([&](std::size_t x) { grow |= c.hasse().row(x); });
    grow.subtract(low);
    if (grow.none()) break;
    low |= past(c, grow, Mode::Reflexive);
  }
  // A chain may stop at a future-boundary point; it must not sit below the slice.
  if ((low - top).intersects(c.future_boundary())) return std::nullopt;
  if (!is_cauchy_slice(c, top)) return std::nullopt;
  return Slice{top, true};
}

std::optional<Slice> level_slice(const Causet& c, double t) {
  const std::size_t n = c.size();
  PointSet seed(n);
  if (c.has_coords()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (c.coords()[i].t < t) seed.set(i);
    }
  } else {
    std::vector<std::size_t> height(n, 0);
    for (std::size_t x : c.topological_order()) {
      c.hasse_past().row(x).for_each([&](std::size_t y) { height[x] = std::max(height[x], height[y] + 1); });
      if (static_cast<double>(height[x]) < t) seed.set(x);
    }
  }
  return cauchy_slice_from_down_set(c, seed, PointSet(n));
}

SliceThroughPoint slice_through_point(const Causet& c, const Slice& a, std::size_t p) {
  if (p >= c.size()) fail(ErrorCode::InvalidArgument, "point out of range");
  if (!is_antichain(c, a.points)) fail(ErrorCode::NotAntichain, "slice points are not pairwise incomparable");
  if (!is_maximal_antichain(c, a.points)) fail(ErrorCode::NotMaximal, "slice is not a maximal antichain");
  if (a.points.test(p)) return {a, is_cauchy_slice(c, a.points), true, 0};

  const PointSet shadow = future_of(c, p, Mode::Reflexive) | past_of(c, p, Mode::Reflexive);
  PointSet keep = a.points - shadow;
  keep.set(p);
  const PointSet above = future(c, keep, Mode::Strict);

  if (auto s = cauchy_slice_from_down_set(c, (past(c, a.points, Mode::Reflexive) - above) | keep, above)) {
    return {*s, true, false, 1};
  }
  if (auto s = cauchy_slice_from_down_set(c, keep, above)) return {*s, true, false, 2};

  std::vector<std::size_t> candidates = (causal_hull(c, keep)).complement().to_vector();
  if (c.has_coords()) {
    double mean = 0.0;
    a.points.for_each([&](std::size_t i) { mean += c.coords()[i].t; });
    mean /= static_cast<double>(std::max<std::size_t>(1, a.points.count()));
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t x, std::size_t y) {
      return std::abs(c.coords()[x].t - mean) < std::abs(c.coords()[y].t - mean);
    });
  }
  PointSet slice = keep;
  PointSet covered = causal_hull(c, keep);
  for (std::size_t x : candidates) {
    if (covered.test(x)) continue;
    slice.set(x);
    covered |= future_of(c, x, Mode::Reflexive) | past_of(c, x, Mode::Reflexive);
  }
  return {Slice{slice, true}, is_cauchy_slice(c, slice), false, 3};
}

}  // namespace clab::causet
