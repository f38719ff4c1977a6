#include "causal_lab/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "causal_lab/errors.hpp"

namespace clab::continuum {

namespace {

// exp(-1/(1-u^2)) on |u| < 1; the smoothing kernel profile (unnormalized).
double kernel_profile(double u) {
  const double s = 1.0 - u * u;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

// Radial pin bump with value 1 at the center, zero beyond radius 1.
double pin_bump(double r2) {
  const double s = 1.0 - r2;
  return s > 0.0 ? std::exp(1.0 - 1.0 / s) : 0.0;
}

// Upper bound on |d/ds exp(1 - 1/(1-s^2))| over s in [0, 1).
constexpr double kPinSlope = 2.2;

std::size_t ipow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Directions on the unit sphere of the leaf.
std::vector<Spatial> sphere_directions(int dim, std::size_t count) {
  std::vector<Spatial> out;
  if (dim == 1) {
    out.push_back({1.0, 0.0, 0.0});
    out.push_back({-1.0, 0.0, 0.0});
  } else if (dim == 2) {
    for (std::size_t k = 0; k < count; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
      out.push_back({std::cos(a), std::sin(a), 0.0});
    }
  } else {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < count; ++k) {
      const double z = 1.0 - 2.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * static_cast<double>(k);
      out.push_back({r * std::cos(a), r * std::sin(a), z});
    }
  }
  return out;
}

Spatial offset(const Spatial& c, const Spatial& dir, double r) {
  return {c[0] + r * dir[0], c[1] + r * dir[1], c[2] + r * dir[2]};
}

// Grid points in the closed ball plus samples of its boundary sphere.
std::vector<Spatial> ball_samples(const SpatialGrid& grid, const SpatialBall& ball) {
  std::vector<Spatial> out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Spatial y = grid.point(k);
    if (spatial_distance(y, ball.center, grid.dim) <= ball.radius) out.push_back(y);
  }
  for (const Spatial& dir : sphere_directions(grid.dim, grid.dim == 3 ? 256 : 64)) {
    out.push_back(offset(ball.center, dir, ball.radius));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// grids and surfaces

SpatialGrid SpatialGrid::with_spacing(int dim, double lo, double hi, double h) {
  if (dim < 1 || dim > kMaxSpatialDim) fail(ErrorCode::InvalidArgument, "grid dimension must be 1..3");
  if (!(hi > lo) || !(h > 0.0)) fail(ErrorCode::InvalidArgument, "grid needs hi > lo and h > 0");
  SpatialGrid g;
  g.dim = dim;
  g.lo = lo;
  g.hi = hi;
  g.per_axis = static_cast<std::size_t>(std::ceil((hi - lo) / h - 1e-9)) + 1;
  return g;
}

std::size_t SpatialGrid::size() const { return ipow(per_axis, dim); }

std::size_t SpatialGrid::axis_index(std::size_t k, int axis) const {
  return (k / ipow(per_axis, axis)) % per_axis;
}

Spatial SpatialGrid::point(std::size_t k) const {
  Spatial y{};
  const double h = spacing();
  for (int a = 0; a < dim; ++a) {
    const std::size_t i = k % per_axis;
    k /= per_axis;
    // Exact endpoints; interior points by affine interpolation.
    y[a] = (i + 1 == per_axis) ? hi : lo + h * static_cast<double>(i);
  }
  return y;
}

SpatialGrid SpatialGrid::refined() const {
  SpatialGrid g = *this;
  g.per_axis = 2 * per_axis - 1;
  return g;
}

std::string_view to_string(Regularity r) { return r == Regularity::Smooth ? "smooth" : "continuous"; }

SurfaceFunction SurfaceFunction::from_closure(const SpatialGrid& grid, Closure f, Regularity regularity) {
  std::vector<double> samples(grid.size());
  for (std::size_t k = 0; k < samples.size(); ++k) samples[k] = f(grid.point(k));
  return SurfaceFunction(grid, std::move(samples), std::move(f), regularity);
}

SurfaceFunction SurfaceFunction::from_samples(const SpatialGrid& grid, std::vector<double> samples,
                                              Regularity regularity) {
  if (samples.size() != grid.size()) fail(ErrorCode::InvalidArgument, "sample count does not match grid");
  for (double v : samples) {
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "surface samples must be finite");
  }
  return SurfaceFunction(grid, std::move(samples), nullptr, regularity);
}

double SurfaceFunction::operator()(const Spatial& y) const { return closure_ ? closure_(y) : interpolate(y); }

double SurfaceFunction::interpolate(const Spatial& y) const {
  const double h = grid_.spacing();
  std::array<std::size_t, kMaxSpatialDim> base{};
  std::array<double, kMaxSpatialDim> frac{};
  for (int a = 0; a < grid_.dim; ++a) {
    const double u = std::clamp((y[a] - grid_.lo) / h, 0.0, static_cast<double>(grid_.per_axis - 1));
    std::size_t i = static_cast<std::size_t>(std::floor(u));
    if (i + 1 >= grid_.per_axis) i = grid_.per_axis - 2;
    base[a] = i;
    frac[a] = u - static_cast<double>(i);
  }
  double value = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << grid_.dim); ++corner) {
    double w = 1.0;
    std::size_t k = 0;
    std::size_t stride = 1;
    for (int a = 0; a < grid_.dim; ++a) {
      const bool up = (corner >> a) & 1u;
      w *= up ? frac[a] : 1.0 - frac[a];
      k += (base[a] + (up ? 1 : 0)) * stride;
      stride *= grid_.per_axis;
    }
    if (w != 0.0) value += w * samples_[k];
  }
  return value;
}

SurfaceFunction SurfaceFunction::resampled(const SpatialGrid& grid) const {
  std::vector<double> samples(grid.size());
  for (std::size_t k = 0; k < samples.size(); ++k) samples[k] = (*this)(grid.point(k));
  Closure f = closure_;
  if (!f) {
    f = [self = *this](const Spatial& y) { return self.interpolate(y); };
  }
  return SurfaceFunction(grid, std::move(samples), std::move(f), regularity_);
}

// ---------------------------------------------------------------------------
// grid checks

namespace {

GridCheck margin_on_samples(const SpatialGrid& grid, const std::vector<double>& v, double margin) {
  GridCheck out;
  const double h = grid.spacing();
  for (std::size_t k = 0; k < v.size(); ++k) {
    double g2 = 0.0;
    std::size_t stride = 1;
    for (int a = 0; a < grid.dim; ++a) {
      const std::size_t i = grid.axis_index(k, a);
      const double d = (i + 1 < grid.per_axis) ? v[k + stride] - v[k] : v[k] - v[k - stride];
      g2 += (d / h) * (d / h);
      stride *= grid.per_axis;
    }
    const double g = std::sqrt(g2);
    if (g > out.worst) {
      out.worst = g;
      out.where = grid.point(k);
    }
  }
  out.ok = out.worst <= 1.0 - margin;
  return out;
}

}  // namespace

GridCheck check_spacelike_margin(const SurfaceFunction& tau, double margin) {
  return margin_on_samples(tau.grid(), tau.samples(), margin);
}

GridCheck check_spacelike_margin(const SurfaceFunction::Closure& tau, const SpatialGrid& grid, double margin) {
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = tau(grid.point(k));
  return margin_on_samples(grid, v, margin);
}

GridCheck check_achronal(const SurfaceFunction& tau, double tol, std::size_t max_pairs) {
  const SpatialGrid& grid = tau.grid();
  const int dim = grid.dim;
  const std::size_t n = grid.size();
  std::vector<Spatial> pts(n);
  for (std::size_t k = 0; k < n; ++k) pts[k] = grid.point(k);
  const auto& v = tau.samples();

  GridCheck out;
  double worst2 = 0.0;
  auto compare = [&](std::size_t i, std::size_t j) {
    double dy2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      const double d = pts[i][a] - pts[j][a];
      dy2 += d * d;
    }
    const double dt = std::abs(v[i] - v[j]);
    if (dt * dt > dy2) {
      if (dt > std::sqrt(dy2) + tol) out.ok = false;
    }
    if (dy2 > 0.0 && dt * dt > worst2 * dy2) {
      worst2 = dt * dt / dy2;
      out.where = pts[i];
    }
  };

  const std::size_t all_pairs = n * (n - 1) / 2;
  if (all_pairs <= max_pairs) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) compare(i, j);
    }
  } else {
    out.exhaustive = false;
    // Every pair within a few cells, plus every point against a strided subsample.
    constexpr long kReach = 3;
    const long per = static_cast<long>(grid.per_axis);
    for (std::size_t i = 0; i < n; ++i) {
      std::array<long, kMaxSpatialDim> idx{};
      for (int a = 0; a < dim; ++a) idx[a] = static_cast<long>(grid.axis_index(i, a));
      const long span = 2 * kReach + 1;
      long total = 1;
      for (int a = 0; a < dim; ++a) total *= span;
      for (long c = 0; c < total; ++c) {
        long rem = c;
        std::size_t j = 0;
        std::size_t stride = 1;
        bool inside = true;
        for (int a = 0; a < dim; ++a) {
          const long o = rem % span - kReach;
          rem /= span;
          const long q = idx[a] + o;
          if (q < 0 || q >= per) {
            inside = false;
            break;
          }
          j += static_cast<std::size_t>(q) * stride;
          stride *= grid.per_axis;
        }
        if (inside && j > i) compare(i, j);
      }
    }
    const std::size_t stride = std::max<std::size_t>(1, n * n / std::max<std::size_t>(1, max_pairs / 2));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = (i * 7919) % stride; j < n; j += stride) {
        if (j != i) compare(i, j);
      }
    }
  }
  out.worst = std::sqrt(worst2);
  return out;
}

EpsilonFunction constant_epsilon(double eps) {
  return [eps](const Spatial&) { return eps; };
}

// ---------------------------------------------------------------------------
// deformation through a point

namespace {

struct SmoothingParams {
  double width = 0.0;       // kernel half-width per axis
  int nodes = 3;            // lattice nodes per half-width
  Spatial anchor{};         // lattice anchored at the pinned point
  int dim = 1;
};

// Kernel-weighted average of tau over a fixed lattice (a Shepard smoother):
// C-infinity in y, a convex combination of values within width*sqrt(dim).
double smoothed_value(const SurfaceFunction& tau, const SmoothingParams& sp, const Spatial& y) {
  const double step = sp.width / sp.nodes;
  std::array<long, kMaxSpatialDim> first{};
  std::array<long, kMaxSpatialDim> count{};
  std::array<std::vector<double>, kMaxSpatialDim> weights;
  for (int a = 0; a < sp.dim; ++a) {
    const double lo = (y[a] - sp.width - sp.anchor[a]) / step;
    const double hi = (y[a] + sp.width - sp.anchor[a]) / step;
    first[a] = static_cast<long>(std::ceil(lo));
    const long last = static_cast<long>(std::floor(hi));
    count[a] = std::max(0L, last - first[a] + 1);
    weights[a].resize(static_cast<std::size_t>(count[a]));
    for (long i = 0; i < count[a]; ++i) {
      const double z = sp.anchor[a] + static_cast<double>(first[a] + i) * step;
      weights[a][static_cast<std::size_t>(i)] = kernel_profile((z - y[a]) / sp.width);
    }
  }
  const double center = tau(y);
  double num = 0.0;
  double den = 0.0;
  long total = 1;
  for (int a = 0; a < sp.dim; ++a) total *= count[a];
  for (long c = 0; c < total; ++c) {
    long rem = c;
    double w = 1.0;
    Spatial z{};
    for (int a = 0; a < sp.dim; ++a) {
      const long i = rem % count[a];
      rem /= count[a];
      w *= weights[a][static_cast<std::size_t>(i)];
      z[a] = sp.anchor[a] + static_cast<double>(first[a] + i) * step;
    }
    if (w == 0.0) continue;
    num += w * (tau(z) - center);
    den += w;
  }
  return den > 0.0 ? center + num / den : center;
}

SpatialGrid patch_grid(int dim, const Spatial& c, double half_width, double points_per_axis) {
  // A cube patch centered at c; per_axis capped so the patch stays ~1e4 points.
  std::size_t per = static_cast<std::size_t>(points_per_axis);
  if (dim == 2) per = std::min<std::size_t>(per, 101);
  if (dim == 3) per = std::min<std::size_t>(per, 21);
  SpatialGrid g;
  g.dim = dim;
  g.lo = -half_width;
  g.hi = half_width;
  g.per_axis = std::max<std::size_t>(per, 3);
  (void)c;
  return g;
}

double min_epsilon(const SpatialGrid& grid, const EpsilonFunction& eps, const Spatial& extra) {
  double m = eps(extra);
  for (std::size_t k = 0; k < grid.size(); ++k) m = std::min(m, eps(grid.point(k)));
  return m;
}

}  // namespace

DeformationCheck verify_deformation(const SurfaceFunction& tau_c, const SurfaceFunction& tau_o, const Event& p,
                                    const EpsilonFunction& eps, const SpatialGrid& grid, double margin,
                                    bool check_achronality) {
  DeformationCheck out;
  out.h = grid.spacing();
  out.through_point = tau_o(p.x) == p.t;
  std::vector<double> v(grid.size());
  out.within_eps = true;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Spatial y = grid.point(k);
    v[k] = tau_o(y);
    const double e = eps(y);
    const double err = std::abs(v[k] - tau_c(y));
    out.sup_error = std::max(out.sup_error, err / e);
    if (!(err < e)) out.within_eps = false;
  }
  const GridCheck m = margin_on_samples(grid, v, margin);
  out.spacelike = m.ok;
  out.max_gradient = m.worst;
  if (check_achronality) {
    SurfaceFunction sampled = SurfaceFunction::from_samples(grid, std::move(v), Regularity::Smooth);
    out.achronal = check_achronal(sampled).ok;
  } else {
    out.achronal = true;
  }
  return out;
}

Deformation deform_surface_through_point(const SurfaceFunction& tau_c, const Event& p, const EpsilonFunction& eps,
                                         const DeformOptions& options) {
  const SpatialGrid& grid = tau_c.grid();
  const int dim = grid.dim;
  const Spatial yp = p.x;
  if (std::abs(tau_c(yp) - p.t) > 1e-9) {
    fail(ErrorCode::InvalidArgument, "the point does not lie on the surface graph");
  }
  const double eps_min = min_epsilon(grid, eps, yp);
  if (!(eps_min > 0.0)) fail(ErrorCode::InvalidArgument, "eps must be strictly positive");

  const GridCheck achronal = check_achronal(tau_c);
  if (!achronal.ok) fail(ErrorCode::NotAchronal, "input surface violates the Lipschitz-1 bound on the grid");
  const double lipschitz = achronal.worst;
  if (lipschitz >= 1.0 - options.margin) {
    fail(ErrorCode::ToleranceUnachievable, "input surface has no spacelike slack to smooth into");
  }

  if (tau_c.regularity() == Regularity::Smooth && tau_c(yp) == p.t &&
      check_spacelike_margin(tau_c, options.margin).ok) {
    Deformation same{tau_c};
    same.unchanged = true;
    same.grid_h = grid.spacing();
    same.max_gradient = check_spacelike_margin(tau_c, options.margin).worst;
    return same;
  }

  const double lip_bound = std::max(lipschitz, 1e-3);
  double width = eps_min / (2.5 * lip_bound * std::sqrt(static_cast<double>(dim)));
  if (options.max_kernel_width > 0.0) width = std::min(width, options.max_kernel_width);
  int nodes = options.nodes_per_width;

  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    SmoothingParams sp{width, nodes, yp, dim};
    const double smooth_at_p = smoothed_value(tau_c, sp, yp);
    const double amplitude = p.t - smooth_at_p;
    const double slack = 1.0 - options.margin - lipschitz;
    double rho = amplitude != 0.0 ? 2.0 * kPinSlope * std::abs(amplitude) / slack : 0.0;
    if (amplitude != 0.0) rho = std::max(rho, 2.0 * width * std::sqrt(static_cast<double>(dim)));
    if (options.max_bump_radius > 0.0 && rho > options.max_bump_radius) {
      width *= 0.5;
      continue;
    }

    SurfaceFunction::Closure f = [tau_c, sp, yp, smooth_at_p, rho, pt = p.t, dim](const Spatial& y) {
      const double s = smoothed_value(tau_c, sp, y);
      if (rho == 0.0) return s;
      double r2 = 0.0;
      for (int a = 0; a < dim; ++a) r2 += (y[a] - yp[a]) * (y[a] - yp[a]);
      const double psi = pin_bump(r2 / (rho * rho));
      // Algebraically s + psi * (pt - s(yp)); this form is exact at y = yp.
      return (1.0 - psi) * s + psi * (pt + (s - smooth_at_p));
    };

    const DeformationCheck main = verify_deformation(tau_c, SurfaceFunction::from_closure(grid, f, Regularity::Smooth),
                                                     p, eps, grid, options.margin, true);
    // Local patch around the pinned point where the bump and the kink live.
    const double half = std::max(1.2 * rho, 3.0 * width * std::sqrt(static_cast<double>(dim)));
    SpatialGrid patch = patch_grid(dim, yp, half, options.patch_points_per_axis);
    SurfaceFunction::Closure shifted = [&f, yp](const Spatial& u) {
      return f({u[0] + yp[0], u[1] + yp[1], u[2] + yp[2]});
    };
    SurfaceFunction::Closure shifted_c = [&tau_c, yp](const Spatial& u) {
      return tau_c({u[0] + yp[0], u[1] + yp[1], u[2] + yp[2]});
    };
    const GridCheck local_margin = check_spacelike_margin(shifted, patch, options.margin);
    bool local_eps = true;
    for (std::size_t k = 0; k < patch.size(); ++k) {
      const Spatial u = patch.point(k);
      const Spatial y{u[0] + yp[0], u[1] + yp[1], u[2] + yp[2]};
      if (!(std::abs(shifted(u) - shifted_c(u)) < eps(y))) local_eps = false;
    }

    if (main.ok() && local_margin.ok && local_eps) {
      Deformation out{SurfaceFunction::from_closure(grid, f, Regularity::Smooth)};
      out.kernel_width = width;
      out.nodes_per_width = nodes;
      out.bump_radius = rho;
      out.bump_amplitude = amplitude;
      out.attempts = attempt;
      out.sup_error = main.sup_error;
      out.max_gradient = std::max(main.max_gradient, local_margin.worst);
      out.grid_h = grid.spacing();
      return out;
    }
    if ((!main.spacelike || !local_margin.ok) && nodes < options.max_nodes_per_width) {
      nodes *= 2;
    } else {
      width *= 0.5;
    }
  }
  fail(ErrorCode::ToleranceUnachievable, "could not meet eps and the spacelike margin on this grid; refine the grid");
}

// ---------------------------------------------------------------------------
// squeeze conditions

namespace {

bool nested_strictly(const SpatialBall& inner, const SpatialBall& outer, int dim) {
  return spatial_distance(inner.center, outer.center, dim) + inner.radius < outer.radius;
}

// Every target grid point z whose graph point lies in J(source graph points)
// must project into `allowed`; returns the first violation.
std::optional<Spatial> hull_escape(const SpatialGrid& grid, const SurfaceFunction& target,
                                   const std::vector<Spatial>& sources, const SurfaceFunction& source_surface,
                                   const SpatialBall& allowed) {
  const int dim = grid.dim;
  std::vector<double> source_t(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) source_t[i] = source_surface(sources[i]);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Spatial z = grid.point(k);
    if (spatial_distance(z, allowed.center, dim) < allowed.radius) continue;
    const double tz = target.at(k);
    for (std::size_t i = 0; i < sources.size(); ++i) {
      if (spatial_distance(z, sources[i], dim) <= std::abs(tz - source_t[i])) return z;
    }
  }
  return std::nullopt;
}

}  // namespace

SqueezeReport check_squeeze_conditions(const SurfaceFunction& tau_c, const SurfaceFunction& tau_co, const SpatialBall& g,
                                       const SpatialBall& u1, const SpatialBall& u2) {
  const SpatialGrid& grid = tau_c.grid();
  if (!nested_strictly(g, u1, grid.dim) || !nested_strictly(u1, u2, grid.dim)) {
    fail(ErrorCode::PreconditionNesting, "bases must satisfy closure(G) in U1 and closure(U1) in U2");
  }
  const SurfaceFunction co = tau_co.grid().per_axis == grid.per_axis && tau_co.grid().lo == grid.lo &&
                                     tau_co.grid().hi == grid.hi
                                 ? tau_co
                                 : tau_co.resampled(grid);
  SqueezeReport out;
  out.h = grid.spacing();
  const std::vector<Spatial> g_samples = ball_samples(grid, g);
  const std::vector<Spatial> u1_samples = ball_samples(grid, u1);
  out.sources_a = g_samples.size();
  out.sources_b = u1_samples.size();
  out.witness_a = hull_escape(grid, co, g_samples, tau_c, u1);
  out.witness_b = hull_escape(grid, tau_c, u1_samples, co, u2);
  out.cond_a = !out.witness_a;
  out.cond_b = !out.witness_b;
  return out;
}

SqueezeResult squeeze_surface(const SurfaceFunction& tau_c, const Event& p, const SpatialBall& g, const SpatialBall& u1,
                              const SpatialBall& u2, const DeformOptions& options) {
  const int dim = tau_c.grid().dim;
  if (!nested_strictly(g, u1, dim) || !nested_strictly(u1, u2, dim)) {
    fail(ErrorCode::PreconditionNesting, "bases must satisfy closure(G) in U1 and closure(U1) in U2");
  }
  const double lipschitz = check_achronal(tau_c).worst;
  const double gap = std::min(u1.radius - spatial_distance(g.center, u1.center, dim) - g.radius,
                              u2.radius - spatial_distance(u1.center, u2.center, dim) - u1.radius);
  // A surface within eps of tau_c moves causal hulls by at most eps / (1 - L).
  double eps = 0.9 * (1.0 - lipschitz) * gap;
  for (int attempt = 0; attempt < 8; ++attempt, eps *= 0.5) {
    Deformation d = deform_surface_through_point(tau_c, p, constant_epsilon(eps), options);
    SqueezeReport r = check_squeeze_conditions(tau_c, d.surface, g, u1, u2);
    if (r.cond_a && r.cond_b) return {std::move(d), r, eps};
  }
  fail(ErrorCode::ToleranceUnachievable, "squeeze conditions did not verify at any tolerance tried");
}

// ---------------------------------------------------------------------------
// cone interpolation

std::vector<Event> sample_cone_closure(const BallDiamond& dia, int dim, double h) {
  std::vector<Event> out;
  const long steps = static_cast<long>(std::ceil(dia.radius / h));
  const long span = 2 * steps + 1;
  long total = span;
  for (int a = 0; a < dim; ++a) total *= span;
  for (long c = 0; c < total; ++c) {
    long rem = c;
    Event e;
    e.t = dia.slice_time + h * static_cast<double>(rem % span - steps);
    rem /= span;
    for (int a = 0; a < dim; ++a) {
      e.x[a] = dia.center[a] + h * static_cast<double>(rem % span - steps);
      rem /= span;
    }
    if (diamond_closure_contains(dia, e, dim)) out.push_back(e);
  }
  const std::vector<Spatial> dirs = sphere_directions(dim, dim == 3 ? 64 : 32);
  for (long s = -steps; s <= steps; ++s) {
    const double dt = dia.radius * static_cast<double>(s) / static_cast<double>(steps);
    const double r = dia.radius - std::abs(dt);
    for (const Spatial& dir : dirs) out.push_back({dia.slice_time + dt, offset(dia.center, dir, r)});
  }
  return out;
}

ConeVerification verify_cone_interpolation(const SpacetimeModel& model, const BallDiamond& inner,
                                           const BallDiamond& outer, const BallDiamond& cone,
                                           const SurfaceFunction& surface, const SqueezeReport& squeeze, double h,
                                           double margin) {
  const int dim = model.dim();
  const Event p = model.excision_point().value();
  ConeVerification out;
  out.h = h;
  const auto inner_samples = sample_cone_closure(inner, dim, h);
  const auto cone_samples = sample_cone_closure(cone, dim, h);
  out.samples = inner_samples.size() + cone_samples.size();
  auto strictly_in = [dim](const BallDiamond& d, const Event& q) {
    return spatial_distance(q.x, d.center, dim) + std::abs(q.t - d.slice_time) < d.radius;
  };
  out.inner_in_cone = std::all_of(inner_samples.begin(), inner_samples.end(),
                                  [&](const Event& q) { return strictly_in(cone, q); });
  out.cone_in_outer = std::all_of(cone_samples.begin(), cone_samples.end(),
                                  [&](const Event& q) { return strictly_in(outer, q); });
  out.disjoint_from_p = std::all_of(cone_samples.begin(), cone_samples.end(),
                                    [&](const Event& q) { return interval(p, q, dim) > 0.0; });
  out.surface_through_p = surface(p.x) == p.t;
  out.base_on_surface = true;
  const SpatialBall base{cone.center, cone.radius};
  for (const Spatial& y : ball_samples(surface.grid(), base)) {
    if (std::abs(surface(y) - cone.slice_time) > kSurfaceTolerance) out.base_on_surface = false;
  }
  out.spacelike = check_spacelike_margin(surface, margin).ok;
  out.squeeze = squeeze.cond_a && squeeze.cond_b;
  return out;
}

ConeInterpolation interpolate_cone(const SpacetimeModel& model, const BallDiamond& inner, const BallDiamond& outer,
                                   const InterpolateConeOptions& options) {
  if (model.kind() != ModelKind::ExcisedMinkowski) {
    fail(ErrorCode::InvalidArgument, "cone interpolation needs an excised model");
  }
  const int dim = model.dim();
  const Event p = *model.excision_point();
  const Window& w = model.window();
  if (!cone_fits_window(w, inner) || !cone_fits_window(w, outer)) {
    fail(ErrorCode::OutOfWindow, "cones must fit the window");
  }
  if (!cone_disjoint_from_point(inner, p, dim)) {
    fail(ErrorCode::ShadowOverlap, "the inner cone meets J(p)");
  }
  if (spatial_distance(outer.center, p.x, dim) < outer.radius + std::abs(outer.slice_time - p.t)) {
    fail(ErrorCode::ShadowOverlap, "the outer cone meets J(p)");
  }

  const double h = options.grid_h;
  const double r_max = outer.radius - spatial_distance(outer.center, inner.center, dim) -
                       std::abs(outer.slice_time - inner.slice_time);
  const double dist_center = spatial_distance(inner.center, p.x, dim);
  const double dt = p.t - inner.slice_time;
  const double r_p = dist_center - std::abs(dt);
  const double slack = std::min(r_max, r_p) - inner.radius;
  if (!(slack > h)) fail(ErrorCode::NoRoom, "nesting slack is below the grid resolution");

  const double r_o = inner.radius + slack / 3.0;
  const double r_2 = inner.radius + 2.0 * slack / 3.0;
  const SpatialBall g{inner.center, inner.radius};
  const SpatialBall u1{inner.center, r_o};
  const SpatialBall u2{inner.center, r_2};

  // Acausal surface through p: the slice of `inner` bent into a cone of slope
  // |dt|/R around p, flat beyond radius R.
  const double dist_u2 = dist_center - r_2;
  const double reach = std::abs(dt) + (dist_u2 - std::abs(dt)) / 3.0;
  const double room = dist_u2 - reach;

  double lo = w.x_lo[0];
  double hi = w.x_hi[0];
  for (int a = 1; a < dim; ++a) {
    lo = std::min(lo, w.x_lo[a]);
    hi = std::max(hi, w.x_hi[a]);
  }
  if (options.grid_extent > 0.0) {
    lo = -options.grid_extent;
    hi = options.grid_extent;
  }
  const SpatialGrid grid = SpatialGrid::with_spacing(dim, lo, hi, h);
  const double t0 = inner.slice_time;
  const Spatial yp = p.x;
  SurfaceFunction::Closure tau = [t0, dt, reach, yp, dim](const Spatial& y) {
    if (dt == 0.0) return t0;
    const double r = spatial_distance(y, yp, dim);
    return t0 + dt * std::max(0.0, 1.0 - r / reach);
  };
  const SurfaceFunction tau_c =
      SurfaceFunction::from_closure(grid, tau, dt == 0.0 ? Regularity::Smooth : Regularity::Continuous);

  DeformOptions deform = options.deform;
  deform.max_kernel_width = room / (3.0 * std::sqrt(static_cast<double>(dim)));
  deform.max_bump_radius = room / 3.0;
  SqueezeResult squeezed = squeeze_surface(tau_c, p, g, u1, u2, deform);

  ConeInterpolation out{BallDiamond{t0, inner.center, r_o}, std::move(squeezed.deformation), squeezed.report, {}, {}};
  out.check = verify_cone_interpolation(model, inner, outer, out.cone, out.surface.surface, out.squeeze, h,
                                        deform.margin);

  const SpatialGrid fine = grid.refined();
  const SurfaceFunction tau_c_fine = tau_c.resampled(fine);
  const SurfaceFunction tau_o_fine = out.surface.surface.resampled(fine);
  const SqueezeReport squeeze_fine = check_squeeze_conditions(tau_c_fine, tau_o_fine, g, u1, u2);
  out.refined = verify_cone_interpolation(model, inner, outer, out.cone, tau_o_fine, squeeze_fine, h / 2.0,
                                          deform.margin);
  if (!out.check.ok() || !out.refined.ok()) {
    fail(ErrorCode::ToleranceUnachievable, "interpolating cone failed verification");
  }
  return out;
}

}  // namespace clab::continuum
