#include "causal_lab/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "causal_lab/errors.hpp"

namespace clab::continuum {

namespace {

std::string describe(const Event& e) {
  std::ostringstream os;
  os << "(" << e.t << "; " << e.x[0] << ", " << e.x[1] << ", " << e.x[2] << ")";
  return os.str();
}

bool finite(const Event& e) {
  return std::isfinite(e.t) && std::all_of(e.x.begin(), e.x.end(), [](double v) { return std::isfinite(v); });
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxSpatialDim) fail(ErrorCode::InvalidArgument, "spatial dimension must be 1..3");
}

// Radical inverse in the given base; used for the deterministic detour lattice.
double radical_inverse(unsigned index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * (index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

constexpr unsigned kDetourSamples = 4096;

}  // namespace

double spatial_distance(const Spatial& a, const Spatial& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double spatial_norm(const Spatial& a, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

double interval(const Event& a, const Event& b, int dim) {
  const double dt = b.t - a.t;
  double dx2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = b.x[i] - a.x[i];
    dx2 += d * d;
  }
  return dx2 - dt * dt;
}

Window Window::unit_box(int dim) { return cube(dim, 0.0, 1.0); }

Window Window::cube(int dim, double lo, double hi) {
  check_dim(dim);
  Window w;
  w.dim = dim;
  w.t_lo = lo;
  w.t_hi = hi;
  for (int i = 0; i < dim; ++i) {
    w.x_lo[i] = lo;
    w.x_hi[i] = hi;
  }
  return w;
}

double Window::volume() const {
  double v = t_hi - t_lo;
  for (int i = 0; i < dim; ++i) v *= x_hi[i] - x_lo[i];
  return v;
}

bool Window::contains(const Event& e) const {
  if (!(e.t >= t_lo && e.t <= t_hi)) return false;
  for (int i = 0; i < dim; ++i) {
    if (!(e.x[i] >= x_lo[i] && e.x[i] <= x_hi[i])) return false;
  }
  return true;
}

bool Window::contains_strictly(const Event& e) const {
  if (!(e.t > t_lo && e.t < t_hi)) return false;
  for (int i = 0; i < dim; ++i) {
    if (!(e.x[i] > x_lo[i] && e.x[i] < x_hi[i])) return false;
  }
  return true;
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Minkowski: return "minkowski";
    case ModelKind::ExcisedMinkowski: return "excised_minkowski";
  }
  return "?";
}

SpacetimeModel::SpacetimeModel(ModelKind kind, int dim, const Window& window, std::optional<Event> p)
    : kind_(kind), dim_(dim), window_(window), excision_point_(p) {
  check_dim(dim);
  if (window.dim != dim) fail(ErrorCode::InvalidArgument, "window dimension does not match model");
  if (!(window.volume() > 0.0) || !std::isfinite(window.volume())) {
    fail(ErrorCode::InvalidArgument, "window must have positive finite volume");
  }
  if (p) {
    if (!finite(*p)) fail(ErrorCode::InvalidArgument, "excision point must be finite");
    if (!window.contains_strictly(*p)) {
      fail(ErrorCode::InvalidArgument, "excision point must lie strictly inside the window");
    }
  }
}

SpacetimeModel SpacetimeModel::minkowski(int dim, const Window& window) {
  return SpacetimeModel(ModelKind::Minkowski, dim, window, std::nullopt);
}

SpacetimeModel SpacetimeModel::excised_minkowski(int dim, const Window& window, const Event& excision_point) {
  return SpacetimeModel(ModelKind::ExcisedMinkowski, dim, window, excision_point);
}

void SpacetimeModel::require_in_window(const Event& e) const {
  if (!finite(e)) fail(ErrorCode::InvalidArgument, "event coordinates must be finite");
  if (!window_.contains(e)) fail(ErrorCode::OutOfWindow, "event " + describe(e) + " lies outside the window");
}

bool SpacetimeModel::in_shadow(const Event& e) const {
  return excision_point_ && interval(*excision_point_, e, dim_) <= 0.0;
}

std::string_view to_string(CausalRelation r) {
  switch (r) {
    case CausalRelation::Chronological: return "chronological";
    case CausalRelation::Lightlike: return "lightlike";
    case CausalRelation::Spacelike: return "spacelike";
    case CausalRelation::Identical: return "identical";
  }
  return "?";
}

std::string_view to_string(TimeOrder o) {
  switch (o) {
    case TimeOrder::Future: return "future";
    case TimeOrder::Past: return "past";
    case TimeOrder::Simultaneous: return "simultaneous";
  }
  return "?";
}

namespace {

CausalRelation ambient_relation(const Event& a, const Event& b, int dim) {
  if (a.t == b.t && std::equal(a.x.begin(), a.x.begin() + dim, b.x.begin())) return CausalRelation::Identical;
  const double s = interval(a, b, dim);
  if (s < 0.0) return CausalRelation::Chronological;
  if (s == 0.0) return CausalRelation::Lightlike;
  return CausalRelation::Spacelike;
}

void require_outside_shadow(const SpacetimeModel& model, const Event& e) {
  if (model.in_shadow(e)) {
    fail(ErrorCode::InExcisedShadow, "event " + describe(e) + " lies in the excised causal shadow");
  }
}

}  // namespace

CausalRelation causal_relation(const SpacetimeModel& model, const Event& a, const Event& b) {
  model.require_in_window(a);
  model.require_in_window(b);
  const CausalRelation ambient = ambient_relation(a, b, model.dim());
  if (model.kind() == ModelKind::Minkowski) return ambient;

  require_outside_shadow(model, a);
  require_outside_shadow(model, b);
  if (ambient == CausalRelation::Spacelike || ambient == CausalRelation::Identical) return ambient;
  // Removing points can only destroy connections, so only causal pairs need a path.
  const bool forward = b.t >= a.t;
  const Event& lo = forward ? a : b;
  const Event& hi = forward ? b : a;
  if (excised_causal_path_exists(model, lo, hi)) return ambient;
  return CausalRelation::Spacelike;
}

TimeOrder time_order(const Event& a, const Event& b) {
  if (b.t > a.t) return TimeOrder::Future;
  if (b.t < a.t) return TimeOrder::Past;
  return TimeOrder::Simultaneous;
}

bool causally_precedes(const SpacetimeModel& model, const Event& a, const Event& b) {
  const CausalRelation r = causal_relation(model, a, b);
  if (r == CausalRelation::Identical) return true;
  if (r == CausalRelation::Spacelike) return false;
  return b.t > a.t;
}

bool straight_segment_avoids_shadow(const SpacetimeModel& model, const Event& a, const Event& b) {
  if (!model.excision_point()) return true;
  const Event& p = *model.excision_point();
  const int dim = model.dim();
  // f(s) = interval(p, a + s (b - a)) = A s^2 + B s + C; touching J(p) means f <= 0.
  const double dt0 = a.t - p.t;
  const double vt = b.t - a.t;
  double A = -vt * vt;
  double B = -2.0 * dt0 * vt;
  double C = -dt0 * dt0;
  for (int i = 0; i < dim; ++i) {
    const double dx0 = a.x[i] - p.x[i];
    const double vx = b.x[i] - a.x[i];
    A += vx * vx;
    B += 2.0 * dx0 * vx;
    C += dx0 * dx0;
  }
  auto f = [&](double s) { return (A * s + B) * s + C; };
  double lowest = std::min(f(0.0), f(1.0));
  if (A > 0.0) {
    const double vertex = -B / (2.0 * A);
    if (vertex > 0.0 && vertex < 1.0) lowest = std::min(lowest, f(vertex));
  }
  return lowest > 0.0;
}

bool excised_causal_path_exists(const SpacetimeModel& model, const Event& a, const Event& b) {
  const int dim = model.dim();
  if (interval(a, b, dim) > 0.0 || b.t < a.t) return false;
  if (straight_segment_avoids_shadow(model, a, b)) return true;
  // Two-segment detours a -> m -> b through a Halton lattice of the window.
  static constexpr std::array<unsigned, 4> kBases{2, 3, 5, 7};
  const Window& w = model.window();
  for (unsigned k = 1; k <= kDetourSamples; ++k) {
    Event m;
    m.t = a.t + (b.t - a.t) * radical_inverse(k, kBases[0]);
    for (int i = 0; i < dim; ++i) {
      m.x[i] = w.x_lo[i] + (w.x_hi[i] - w.x_lo[i]) * radical_inverse(k, kBases[i + 1]);
    }
    if (model.in_shadow(m)) continue;
    if (interval(a, m, dim) > 0.0 || interval(m, b, dim) > 0.0) continue;
    if (straight_segment_avoids_shadow(model, a, m) && straight_segment_avoids_shadow(model, m, b)) return true;
  }
  return false;
}

bool excision_membership(const SpacetimeModel& model, const Event& q) {
  if (model.kind() != ModelKind::ExcisedMinkowski) {
    fail(ErrorCode::InvalidArgument, "excision membership requires an excised model");
  }
  model.require_in_window(q);
  return interval(*model.excision_point(), q, model.dim()) > 0.0;
}

bool surface_membership_co(const SpacetimeModel& model, const Event& q) {
  model.require_in_window(q);
  const Event apex = model.excision_point().value_or(Event{});
  const double dt = q.t - apex.t;
  const double r = spatial_distance(q.x, apex.x, model.dim());
  return dt > 0.0 && std::abs(dt - 0.5 * r) <= kSurfaceTolerance;
}

bool cone_fits_window(const Window& window, const BallDiamond& dia) {
  if (dia.slice_time - dia.radius < window.t_lo || dia.slice_time + dia.radius > window.t_hi) return false;
  for (int i = 0; i < window.dim; ++i) {
    if (dia.center[i] - dia.radius < window.x_lo[i] || dia.center[i] + dia.radius > window.x_hi[i]) return false;
  }
  return true;
}

BallDiamond make_ball_diamond(const SpacetimeModel& model, double slice_time, const Spatial& center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    fail(ErrorCode::InvalidArgument, "diamond radius must be positive");
  }
  BallDiamond dia{slice_time, center, radius};
  if (!cone_fits_window(model.window(), dia)) fail(ErrorCode::OutOfWindow, "diamond does not fit the window");
  return dia;
}

bool diamond_closure_contains(const BallDiamond& dia, const Event& q, int dim) {
  return spatial_distance(q.x, dia.center, dim) + std::abs(q.t - dia.slice_time) <= dia.radius;
}

bool diamond_membership(const SpacetimeModel& model, const BallDiamond& dia, const Event& q) {
  model.require_in_window(q);
  if (model.in_shadow(q)) return false;
  return spatial_distance(q.x, dia.center, model.dim()) + std::abs(q.t - dia.slice_time) < dia.radius;
}

bool causally_disjoint_cones(const SpacetimeModel& model, const BallDiamond& d1, const BallDiamond& d2) {
  if (!cone_fits_window(model.window(), d1) || !cone_fits_window(model.window(), d2)) {
    fail(ErrorCode::OutOfWindow, "cone does not fit the window");
  }
  const double gap = spatial_distance(d1.center, d2.center, model.dim());
  return gap > d1.radius + d2.radius + std::abs(d1.slice_time - d2.slice_time);
}

bool cone_disjoint_from_point(const BallDiamond& dia, const Event& p, int dim) {
  return spatial_distance(dia.center, p.x, dim) > dia.radius + std::abs(dia.slice_time - p.t);
}

}  // namespace clab::continuum
