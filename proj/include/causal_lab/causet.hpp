#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "causal_lab/bitset.hpp"
#include "causal_lab/spacetime.hpp"

namespace clab::causet {

using continuum::Event;
using continuum::SpacetimeModel;
using PointSet = BitSet;

/// Smallest transitive superset of a strict relation. Throws CycleDetected.
BitMatrix transitive_closure(const BitMatrix& raw);
/// Covering relation of a transitively closed DAG.
BitMatrix transitive_reduction(const BitMatrix& order);

/// Finite causal set: strict order, its covering relation, optional
/// coordinates. Immutable once built.
///
/// Boundary marks flag points that sit on the edge of a cut-out region (see
/// excise): a chain may end at a past-boundary point going down, or at a
/// future-boundary point going up, like at a window-extremal element.
class Causet {
 public:
  Causet() = default;

  /// Closes an arbitrary acyclic generating relation.
  static Causet from_relation(const BitMatrix& raw, std::vector<Event> coords = {}, int dim = 0,
                              std::uint64_t seed = 0);
  /// Takes an already transitively closed order; throws if it is not one.
  static Causet from_order(BitMatrix order, std::vector<Event> coords = {}, int dim = 0, std::uint64_t seed = 0);

  std::size_t size() const noexcept { return order_.size(); }
  bool empty() const noexcept { return size() == 0; }

  const BitMatrix& order() const noexcept { return order_; }
  const BitMatrix& past_order() const noexcept { return past_; }
  const BitMatrix& hasse() const noexcept { return hasse_; }
  const BitMatrix& hasse_past() const noexcept { return hasse_past_; }

  bool precedes(std::size_t i, std::size_t j) const noexcept { return order_.test(i, j); }
  bool comparable(std::size_t i, std::size_t j) const noexcept { return order_.test(i, j) || order_.test(j, i); }

  bool has_coords() const noexcept { return !coords_.empty(); }
  const std::vector<Event>& coords() const noexcept { return coords_; }
  int dim() const noexcept { return dim_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Ids in an order compatible with precedence.
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }

  const PointSet& past_boundary() const noexcept { return past_boundary_; }
  const PointSet& future_boundary() const noexcept { return future_boundary_; }
  void set_boundary(PointSet past, PointSet future);

  PointSet none() const { return PointSet(size()); }
  PointSet all() const { return PointSet::full(size()); }

  /// Irreflexive, antisymmetric, transitive, and hasse is its reduction.
  bool check_axioms() const;

 private:
  void finish();

  BitMatrix order_;
  BitMatrix past_;
  BitMatrix hasse_;
  BitMatrix hasse_past_;
  std::vector<Event> coords_;
  int dim_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::size_t> topo_;
  PointSet past_boundary_;
  PointSet future_boundary_;
};

struct SprinkleOptions {
  double max_expected_points = 5000.0;
};

/// Poisson sprinkling into the model window; ids sorted by time. Points of
/// an excised model that fall in J(p) are discarded.
Causet sprinkle(const SpacetimeModel& model, double density, std::uint64_t seed, const SprinkleOptions& options = {});

/// Causet induced on explicit events by the model's causal order.
Causet from_events(const SpacetimeModel& model, std::vector<Event> events, std::uint64_t seed = 0);

enum class Mode { Strict, Reflexive };

PointSet future(const Causet& c, const PointSet& s, Mode mode);
PointSet past(const Causet& c, const PointSet& s, Mode mode);
PointSet future_of(const Causet& c, std::size_t x, Mode mode);
PointSet past_of(const Causet& c, std::size_t x, Mode mode);
/// J(S) = future(S) | past(S), reflexive.
PointSet causal_hull(const Causet& c, const PointSet& s);

PointSet dependence_future(const Causet& c, const PointSet& s);
PointSet dependence_past(const Causet& c, const PointSet& s);
PointSet domain_of_dependence(const Causet& c, const PointSet& s);

/// An inextendible chain through x that misses s (x must lie outside D(s)),
/// listed from past to future.
std::vector<std::size_t> uncovered_chain(const Causet& c, const PointSet& s, std::size_t x);

bool is_antichain(const Causet& c, const PointSet& s);
/// No point outside s is incomparable to every member.
bool is_maximal_antichain(const Causet& c, const PointSet& s);

struct Slice {
  PointSet points;
  bool maximal = false;
};

/// Validates the antichain (NotAntichain) and records maximality.
Slice make_slice(const Causet& c, const PointSet& points);

/// D(A) = everything. Throws NotAntichain.
bool is_cauchy_slice(const Causet& c, const PointSet& a);

struct Excision {
  Causet causet;
  std::vector<std::size_t> to_ambient;    // excision id -> ambient id
  std::vector<std::size_t> from_ambient;  // ambient id -> excision id, or npos
  std::size_t excised_point = 0;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  PointSet to_ambient_set(const PointSet& s, std::size_t ambient_size) const;
  /// Throws InvalidArgument if s meets J(p).
  PointSet from_ambient_set(const PointSet& s) const;
};

/// Induced subcauset on the points incomparable to p. Points with a covering
/// link into J(p) carry boundary marks on the matching side.
Excision excise(const Causet& c, std::size_t p);

/// Maximal antichain A = max(L) for a down-set L grown from `seed_down` until
/// no covering link leaves L below its top; such an antichain meets every
/// inextendible chain. `forbidden` points may not enter L. Returns nullopt if
/// the growth is forced into a forbidden point or no such slice exists.
std::optional<Slice> cauchy_slice_from_down_set(const Causet& c, const PointSet& seed_down,
                                                const PointSet& forbidden);

/// Cauchy slice near coordinate time t (height level t when there are no
/// coordinates).
std::optional<Slice> level_slice(const Causet& c, double t);

struct SliceThroughPoint {
  Slice slice;
  bool cauchy = false;
  bool unchanged = false;
  int method = 0;  // 0 unchanged, 1 grown from A, 2 grown from {p} u A only, 3 greedy completion
};

/// Maximal antichain containing {p} and A \ J(p). Prefers a Cauchy slice;
/// otherwise completes greedily by |t - mean slice time|, then id, and
/// reports cauchy = false. Throws NotAntichain / NotMaximal.
SliceThroughPoint slice_through_point(const Causet& c, const Slice& a, std::size_t p);

}  // namespace clab::causet
