#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "causal_lab/spacetime.hpp"

namespace clab::continuum {

/// Uniform lattice over the cube [lo, hi]^dim of the foliation leaf.
struct SpatialGrid {
  int dim = 1;
  double lo = -1.0;
  double hi = 1.0;
  std::size_t per_axis = 2;

  /// Lattice with spacing as close to h as the extent allows (never coarser).
  static SpatialGrid with_spacing(int dim, double lo, double hi, double h);

  double spacing() const { return (hi - lo) / static_cast<double>(per_axis - 1); }
  std::size_t size() const;
  Spatial point(std::size_t k) const;
  std::size_t axis_index(std::size_t k, int axis) const;
  /// Same cube at half the spacing.
  SpatialGrid refined() const;
};

enum class Regularity { Continuous, Smooth };

std::string_view to_string(Regularity r);

/// Graph t = tau(y) over the foliation leaf, representing a Cauchy surface.
/// Samples on the grid are always present; an analytic closure is used for
/// off-grid evaluation when available, multilinear interpolation otherwise.
class SurfaceFunction {
 public:
  using Closure = std::function<double(const Spatial&)>;

  static SurfaceFunction from_closure(const SpatialGrid& grid, Closure f, Regularity regularity);
  static SurfaceFunction from_samples(const SpatialGrid& grid, std::vector<double> samples, Regularity regularity);

  const SpatialGrid& grid() const noexcept { return grid_; }
  Regularity regularity() const noexcept { return regularity_; }
  const std::vector<double>& samples() const noexcept { return samples_; }
  bool has_closure() const noexcept { return static_cast<bool>(closure_); }

  double operator()(const Spatial& y) const;
  double at(std::size_t k) const { return samples_[k]; }

  /// Same function sampled on another grid (requires the closure or interpolation).
  SurfaceFunction resampled(const SpatialGrid& grid) const;

 private:
  SurfaceFunction(const SpatialGrid& grid, std::vector<double> samples, Closure f, Regularity regularity)
      : grid_(grid), samples_(std::move(samples)), closure_(std::move(f)), regularity_(regularity) {}

  double interpolate(const Spatial& y) const;

  SpatialGrid grid_;
  std::vector<double> samples_;
  Closure closure_;
  Regularity regularity_;
};

/// Outcome of a grid verification: the worst value seen and where.
struct GridCheck {
  bool ok = true;
  double worst = 0.0;
  Spatial where{};
  bool exhaustive = true;
};

/// Max over the grid of the forward-difference gradient norm.
GridCheck check_spacelike_margin(const SurfaceFunction& tau, double margin);
GridCheck check_spacelike_margin(const SurfaceFunction::Closure& tau, const SpatialGrid& grid, double margin);

/// |tau(y1) - tau(y2)| <= |y1 - y2| (+tol) on grid pairs. All pairs are
/// compared up to max_pairs; larger grids compare every pair within a few
/// cells plus every point against a strided subsample (exhaustive = false).
GridCheck check_achronal(const SurfaceFunction& tau, double tol = 1e-12, std::size_t max_pairs = 200'000'000);

using EpsilonFunction = std::function<double(const Spatial&)>;

EpsilonFunction constant_epsilon(double eps);

struct DeformOptions {
  double margin = 1e-6;                  // required slack below the light-cone slope 1
  int max_attempts = 16;
  int nodes_per_width = 3;               // smoothing-lattice nodes per kernel half-width
  int max_nodes_per_width = 12;
  double max_kernel_width = 0.0;         // 0 = unbounded
  double max_bump_radius = 0.0;          // 0 = unbounded
  double patch_points_per_axis = 41;     // local verification patch around the pinned point
};

struct Deformation {
  SurfaceFunction surface;
  double kernel_width = 0.0;
  int nodes_per_width = 0;
  double bump_radius = 0.0;
  double bump_amplitude = 0.0;
  int attempts = 0;
  bool unchanged = false;
  double sup_error = 0.0;      // max over the grid of |tau_out - tau_in| / eps
  double max_gradient = 0.0;
  double grid_h = 0.0;
};

/// Smooth spacelike surface through p = (p.t, y_p) within eps of tau_c.
/// Smooths tau_c with a compact kernel, then adds a bump pinning the value at
/// y_p; the kernel width is shrunk until every postcondition holds on the grid.
Deformation deform_surface_through_point(const SurfaceFunction& tau_c, const Event& p, const EpsilonFunction& eps,
                                         const DeformOptions& options = {});

struct DeformationCheck {
  bool through_point = false;
  bool within_eps = false;
  bool spacelike = false;
  bool achronal = false;
  double sup_error = 0.0;
  double max_gradient = 0.0;
  double h = 0.0;
  bool ok() const { return through_point && within_eps && spacelike && achronal; }
};

/// Re-verifies a deformation on an arbitrary grid (e.g. grid.refined()).
DeformationCheck verify_deformation(const SurfaceFunction& tau_c, const SurfaceFunction& tau_o, const Event& p,
                                    const EpsilonFunction& eps, const SpatialGrid& grid, double margin,
                                    bool check_achronality = true);

struct SpatialBall {
  Spatial center{};
  double radius = 0.0;
};

struct SqueezeReport {
  bool cond_a = false;
  bool cond_b = false;
  std::optional<Spatial> witness_a;
  std::optional<Spatial> witness_b;
  double h = 0.0;
  std::size_t sources_a = 0;
  std::size_t sources_b = 0;
};

/// Samples the causal hulls on the grid:
///  a) J(G-bar) meets the deformed surface only over U1;
///  b) J(closure of U1 on the deformed surface) meets the original only over U2.
SqueezeReport check_squeeze_conditions(const SurfaceFunction& tau_c, const SurfaceFunction& tau_co, const SpatialBall& g,
                                       const SpatialBall& u1, const SpatialBall& u2);

/// Deformation through p chosen small enough for both squeeze conditions,
/// halving the tolerance until they verify.
struct SqueezeResult {
  Deformation deformation;
  SqueezeReport report;
  double eps = 0.0;
};
SqueezeResult squeeze_surface(const SurfaceFunction& tau_c, const Event& p, const SpatialBall& g, const SpatialBall& u1,
                              const SpatialBall& u2, const DeformOptions& options = {});

struct InterpolateConeOptions {
  double grid_h = 0.05;
  double grid_extent = 0.0;  // half-width of the leaf grid; 0 = derived from the window
  DeformOptions deform{};
};

struct ConeVerification {
  bool inner_in_cone = false;
  bool cone_in_outer = false;
  bool disjoint_from_p = false;
  bool surface_through_p = false;
  bool base_on_surface = false;
  bool spacelike = false;
  bool squeeze = false;
  double h = 0.0;
  std::size_t samples = 0;
  bool ok() const {
    return inner_in_cone && cone_in_outer && disjoint_from_p && surface_through_p && base_on_surface && spacelike &&
           squeeze;
  }
};

struct ConeInterpolation {
  BallDiamond cone;
  Deformation surface;         // spacelike Cauchy surface through p carrying the base of cone
  SqueezeReport squeeze;
  ConeVerification check;      // at grid_h
  ConeVerification refined;    // at grid_h / 2
};

/// Double cone D_o with closure(inner) in D_o, closure(D_o) in outer and
/// D_o causally disjoint from the excision point, based on a smooth spacelike
/// surface through that point.
ConeInterpolation interpolate_cone(const SpacetimeModel& model, const BallDiamond& inner, const BallDiamond& outer,
                                   const InterpolateConeOptions& options = {});

/// Deterministic samples of a closed double cone: a lattice of spacing h plus
/// points on the boundary shell.
std::vector<Event> sample_cone_closure(const BallDiamond& dia, int dim, double h);

ConeVerification verify_cone_interpolation(const SpacetimeModel& model, const BallDiamond& inner,
                                           const BallDiamond& outer, const BallDiamond& cone,
                                           const SurfaceFunction& surface, const SqueezeReport& squeeze, double h,
                                           double margin);

}  // namespace clab::continuum
