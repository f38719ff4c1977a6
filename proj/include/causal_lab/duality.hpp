#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "causal_lab/pauli.hpp"
#include "causal_lab/regions.hpp"

namespace clab::duality {

using causet::Causet;
using causet::DiamondSpec;
using causet::PointSet;

/// Full Pauli net over a causet: region O gets every string supported in O.
AlgebraBasis algebra_of_region(const Causet& c, const PointSet& region);

/// Isotony and locality of the net on a family, checked exhaustively over
/// pairs: O1 in O2 gives nested algebras; O1 disjoint from O2 gives
/// commuting bases.
bool check_net_axioms(const Causet& c, const std::vector<PointSet>& family);

struct HaagReport {
  bool holds = false;
  AlgebraBasis lhs;
  AlgebraBasis rhs;
  std::vector<PauliString> witnesses;  // strings in rhs but not in lhs
  bool empty_family = false;           // no disjoint member: rhs is everything by convention
  bool d1_in_family = false;
  std::size_t disjoint_members = 0;
};

/// lhs = algebra(D1); rhs = intersection of commutants of the algebras of
/// the family members causally disjoint from D1.
HaagReport haag_duality_check(const Causet& c, const PointSet& d1, const std::vector<PointSet>& family);

/// Union of the family members disjoint from D1 is exactly the complement of D1.
bool covering_oracle(const Causet& c, const PointSet& d1, const std::vector<PointSet>& family);

enum class PuncturedMode { Ambient, Excised };

std::string_view to_string(PuncturedMode mode);

struct PuncturedReport {
  PuncturedMode mode = PuncturedMode::Ambient;
  bool holds = false;
  AlgebraBasis lhs;  // in the site space of the mode
  AlgebraBasis rhs;
  std::vector<PauliString> witnesses;  // ambient site ids
  bool witness_in_shadow = false;      // some witness is supported inside J(p)
  bool empty_family = false;
  std::size_t disjoint_members = 0;
  std::size_t sites = 0;
};

/// Haag duality with the complement family restricted to members causally
/// disjoint from D1 and p. Ambient mode works on all sites; excised mode on
/// the sites outside J(p). Throws PreconditionShadow if D1 meets J(p).
PuncturedReport punctured_hd_check(const Causet& c, const PointSet& d1, std::size_t p,
                                   const std::vector<PointSet>& family, PuncturedMode mode);

struct LocalDefinitenessReport {
  AlgebraBasis intersection;
  AlgebraBasis floor;  // algebra of the common points
  bool minimal = false;
  std::size_t containing = 0;
};

/// Intersection of the algebras of the family members containing p.
/// Throws NoContainingDiamond.
LocalDefinitenessReport local_definiteness_check(const Causet& c, std::size_t p, const std::vector<PointSet>& family);

struct OuterRegularityReport {
  bool holds = false;
  AlgebraBasis intersection;
  bool matches_floor = false;  // intersection == algebra of the common points
  std::size_t supersets = 0;
};

/// Intersection of the algebras of family members D != D1 containing the
/// hasse buffer of D1. Throws NoSuperset.
OuterRegularityReport outer_regularity_check(const Causet& c, const PointSet& d1, const std::vector<PointSet>& family,
                                             int buffer_steps = 1);

struct GenerationReport {
  bool holds = false;
  bool covered = false;  // every point lies in some proper region
  std::size_t regions = 0;
};

/// Span of the algebras of all proper convex regions is everything.
GenerationReport generation_check(const Causet& c, const causet::FamilyOptions& options = {});

struct BridgeEntry {
  PointSet d1;
  AlgebraBasis rhs_a;
  AlgebraBasis rhs_b;
  PointSet covered_only_a;  // points of members disjoint from D1 and p in one family only
  PointSet covered_only_b;
  std::vector<causet::NoInterpolant> explanations;
};

struct BridgeReport {
  bool all_equal = true;
  std::size_t shared = 0;
  std::size_t compared = 0;
  std::size_t interpolation_attempts = 0;
  std::size_t interpolation_failures = 0;
  std::vector<BridgeEntry> discrepancies;
  bool unexplained = false;  // a discrepancy without a NoInterpolant for it
};

/// For each shared D1, compares the excised-mode complement intersection
/// built from famA with the one built from famB. For every member of either
/// family disjoint from D1 and p, interpolation into the shared family
/// within the complement of J(D1 u p) is attempted; discrepancies list the
/// failures that explain them.
BridgeReport cofinality_bridge(const Causet& c, std::size_t p, const std::vector<DiamondSpec>& fam_a,
                               const std::vector<DiamondSpec>& fam_b, const std::vector<DiamondSpec>& fam_shared);

/// Literal intersection of two diamond families by span.
std::vector<DiamondSpec> shared_diamonds(const std::vector<DiamondSpec>& fam_a, const std::vector<DiamondSpec>& fam_b);

}  // namespace clab::duality
