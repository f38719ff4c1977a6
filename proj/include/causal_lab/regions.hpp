#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "causal_lab/causet.hpp"

namespace clab::causet {

enum class RegionKind { Convex, Diamond, Arbitrary };

std::string_view to_string(RegionKind kind);

struct Region {
  PointSet points;
  RegionKind kind = RegionKind::Arbitrary;
};

/// x, y in S and x < z < y imply z in S.
bool is_order_convex(const Causet& c, const PointSet& s);
/// Connected under comparability inside S.
bool is_comparability_connected(const Causet& c, const PointSet& s);
/// Nonempty, order-convex and connected: the finite stand-in for an open
/// connected relatively compact region.
bool is_convex_region(const Causet& c, const PointSet& s);

/// Validating constructor; throws InvalidArgument when the kind's
/// invariants fail or the causet is empty.
Region make_region(const Causet& c, const PointSet& points, RegionKind kind);

/// Neither set meets the reflexive causal hull of the other.
bool causally_disjoint(const Causet& c, const PointSet& r1, const PointSet& r2);

/// S together with every point within `steps` covering links of it.
PointSet hasse_buffer(const Causet& c, const PointSet& s, int steps = 1);

struct FamilyOptions {
  std::size_t exhaustive_limit = 12;
  std::size_t sample_budget = 1000;
  std::uint64_t seed = 0;
};

struct RegionFamily {
  std::vector<PointSet> regions;  // sorted, distinct
  bool exhaustive = false;
  std::size_t samples = 0;        // draws made when sampling
};

/// All convex regions when n <= exhaustive_limit, otherwise the convex
/// connected hulls of sample_budget random point pairs and triples.
RegionFamily convex_region_family(const Causet& c, const FamilyOptions& options = {});

/// A random convex region: the hull of 1-3 points drawn from `pool`,
/// restricted to the comparability component of the first point.
PointSet sample_convex_region(const Causet& c, const PointSet& pool, std::mt19937_64& rng);

struct Eq35Report {
  bool equal = true;
  bool exhaustive = false;
  std::size_t excised_family = 0;   // family sizes (exhaustive) or samples per side
  std::size_t ambient_family = 0;
  std::vector<PointSet> only_excised;  // ambient ids
  std::vector<PointSet> only_ambient;
};

/// Convex regions of the excision of p against convex regions of c that are
/// causally disjoint from p.
Eq35Report eq35_check(const Causet& c, std::size_t p, const FamilyOptions& options = {});

struct DiamondSpec {
  Slice slice;
  PointSet base;
  PointSet span;  // D(base)
};

struct DiamondOptions {
  std::size_t exhaustive_limit = 12;
  std::size_t sample_budget = 64;
  std::size_t max_base = 6;
  std::uint64_t seed = 0;
  std::vector<PointSet> extra_bases;  // always included when admissible
};

/// A base is admissible when its span is comparability-connected.
std::optional<DiamondSpec> make_diamond(const Causet& c, const Slice& slice, const PointSet& base);

/// Diamonds over admissible bases of the slice: every nonempty subset when
/// |A| <= exhaustive_limit, otherwise all singletons plus sampled spatial
/// neighbourhoods. Ordered by span size, then base.
std::vector<DiamondSpec> diamonds_on_slice(const Causet& c, const Slice& a, const DiamondOptions& options = {});

struct NoInterpolant {
  enum class Reason { PreconditionViolated, Gap } reason = Reason::Gap;
  std::optional<std::size_t> witness;  // buffer point outside the outer set
};

struct InterpolationResult {
  std::optional<DiamondSpec> diamond;
  std::optional<NoInterpolant> failure;
  bool ok() const { return diamond.has_value(); }
};

/// Smallest shared diamond sandwiched between inner and outer (ties by base
/// order). Checks the buffer precondition first.
InterpolationResult interpolate_diamond(const Causet& c, const DiamondSpec& inner, const PointSet& outer,
                                        const std::vector<DiamondSpec>& shared_family, int buffer_steps = 1);
InterpolationResult interpolate_diamond(const Causet& c, const DiamondSpec& inner, const DiamondSpec& outer,
                                        const std::vector<DiamondSpec>& shared_family, int buffer_steps = 1);

struct Prop33Report {
  bool forward = false;
  bool converse = false;
  bool converse_from_supplied = false;       // false: A \ {p} was used
  std::vector<std::size_t> forward_witness;  // ambient ids of an uncovered chain
  std::vector<std::size_t> converse_witness;
};

/// forward: A \ {p} is a Cauchy slice of the excision of p.
/// converse: A_p u {p} is an acausal Cauchy slice of c, for the supplied
/// Cauchy slice A_p of the excision (excision ids), or A \ {p} if none.
/// Throws PreconditionFailure if A is not a maximal Cauchy antichain
/// containing p, or A_p is not a Cauchy slice of the excision.
Prop33Report prop33_check(const Causet& c, const PointSet& a, std::size_t p,
                          const std::optional<PointSet>& excision_slice = std::nullopt);

}  // namespace clab::causet
