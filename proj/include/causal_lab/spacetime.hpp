#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace clab::continuum {

inline constexpr int kMaxSpatialDim = 3;

using Spatial = std::array<double, kMaxSpatialDim>;

/// A point (t, x) of a 1+d Minkowski chart. Components of x beyond the
/// model's spatial dimension are ignored and expected to be zero.
struct Event {
  double t = 0.0;
  Spatial x{};

  friend bool operator==(const Event&, const Event&) = default;
};

double spatial_distance(const Spatial& a, const Spatial& b, int dim);
double spatial_norm(const Spatial& a, int dim);

/// Minkowski interval -dt^2 + |dx|^2 (mostly-plus signature).
double interval(const Event& a, const Event& b, int dim);

/// Closed coordinate box delimiting the working chart.
struct Window {
  int dim = 1;
  double t_lo = 0.0;
  double t_hi = 1.0;
  Spatial x_lo{};
  Spatial x_hi{};

  static Window unit_box(int dim);
  static Window cube(int dim, double lo, double hi);

  double volume() const;
  bool contains(const Event& e) const;
  /// Strictly inside (all coordinates away from the faces).
  bool contains_strictly(const Event& e) const;
};

enum class ModelKind { Minkowski, ExcisedMinkowski };

std::string_view to_string(ModelKind kind);

/// Minkowski space in 1+d dimensions, or its causal excision M \ J(p),
/// restricted to a coordinate window.
class SpacetimeModel {
 public:
  static SpacetimeModel minkowski(int dim, const Window& window);
  static SpacetimeModel excised_minkowski(int dim, const Window& window, const Event& excision_point);

  ModelKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  const Window& window() const noexcept { return window_; }
  const std::optional<Event>& excision_point() const noexcept { return excision_point_; }

  /// Throws OutOfWindow if e lies outside the window.
  void require_in_window(const Event& e) const;
  /// True if e lies in the excised causal shadow J(p); always false for plain Minkowski.
  bool in_shadow(const Event& e) const;

 private:
  SpacetimeModel(ModelKind kind, int dim, const Window& window, std::optional<Event> p);

  ModelKind kind_;
  int dim_;
  Window window_;
  std::optional<Event> excision_point_;
};

enum class CausalRelation { Chronological, Lightlike, Spacelike, Identical };

/// Future/past annotation of b relative to a.
enum class TimeOrder { Future, Past, Simultaneous };

std::string_view to_string(CausalRelation r);
std::string_view to_string(TimeOrder o);

/// Symmetric causal verdict between two events of the model. For an excised
/// model both events must lie outside J(p) and connections are realized by
/// paths avoiding J(p).
CausalRelation causal_relation(const SpacetimeModel& model, const Event& a, const Event& b);

TimeOrder time_order(const Event& a, const Event& b);

/// a <= b in the causal order (a == b, or b in the causal future of a).
bool causally_precedes(const SpacetimeModel& model, const Event& a, const Event& b);

/// True if the straight segment from a to b never touches J(p) of an excised model.
bool straight_segment_avoids_shadow(const SpacetimeModel& model, const Event& a, const Event& b);

/// Explicit search for a causal path from a to b inside M \ J(p): the straight
/// segment, or else a two-segment path through a lattice of detour points.
bool excised_causal_path_exists(const SpacetimeModel& model, const Event& a, const Event& b);

/// q not in J(p) for an excised model.
bool excision_membership(const SpacetimeModel& model, const Event& q);

inline constexpr double kSurfaceTolerance = 1e-12;

/// Membership in the cone-shaped surface t - p.t = |x - p.x| / 2, t > p.t,
/// a spacelike Cauchy surface of the excision of p.
bool surface_membership_co(const SpacetimeModel& model, const Event& q);

/// Double cone over a spatial ball on the slice t = slice_time.
struct BallDiamond {
  double slice_time = 0.0;
  Spatial center{};
  double radius = 0.0;
};

/// Validating constructor: radius > 0 and the closed cone fits the window.
BallDiamond make_ball_diamond(const SpacetimeModel& model, double slice_time, const Spatial& center,
                              double radius);

/// Interior of the double cone: |x - c| + |t - t0| < r.
bool diamond_membership(const SpacetimeModel& model, const BallDiamond& dia, const Event& q);
/// Closed double cone, no window checks.
bool diamond_closure_contains(const BallDiamond& dia, const Event& q, int dim);

bool cone_fits_window(const Window& window, const BallDiamond& dia);

/// Closure of d2 misses J(closure of d1): |c1 - c2| > r1 + r2 + |t1 - t2|.
bool causally_disjoint_cones(const SpacetimeModel& model, const BallDiamond& d1, const BallDiamond& d2);

/// Closure of dia misses J(p).
bool cone_disjoint_from_point(const BallDiamond& dia, const Event& p, int dim);

}  // namespace clab::continuum
