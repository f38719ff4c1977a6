#pragma once

#include <cstddef>
#include <vector>

#include "causal_lab/regions.hpp"

namespace clab::causet {

struct FamilySpec {
  std::vector<double> levels{0.25, 0.5, 0.75};  // coordinate times (heights without coordinates)
  DiamondOptions diamonds{};
  // Keep an ambient level slice only when some Cauchy slice through p
  // retains its points outside J(p).
  bool p_compatible = true;
};

/// Diamond families around a marked point p:
///  - ambient: diamonds on the ambient slice list;
///  - fam_a: ambient diamonds causally disjoint from p;
///  - fam_b: diamonds of the excision of p on its slice list, in ambient ids;
///  - shared: spans present in both fam_a and fam_b.
/// The ambient list holds level slices, Cauchy slices through p, and
/// B u {p} for each excision slice B that is Cauchy in c; the excision list
/// holds excision level slices and A \ {p} for each ambient slice A through p. Every base found on one slice
/// is offered to every other slice containing it, so one base yields the
/// same diamond in every list where it fits.
struct PuncturedFamilies {
  std::size_t p = 0;
  std::vector<Slice> ambient_slices;
  std::vector<Slice> excision_slices;  // excision ids
  std::vector<DiamondSpec> ambient;
  std::vector<DiamondSpec> fam_a;
  std::vector<DiamondSpec> fam_b;
  std::vector<DiamondSpec> shared;
  std::size_t through_point_attempts = 0;
  std::size_t through_point_cauchy = 0;
};

PuncturedFamilies build_punctured_families(const Causet& c, std::size_t p, const FamilySpec& spec = {});

/// Diamonds on the level slices of c (no marked point).
std::vector<DiamondSpec> level_diamonds(const Causet& c, const FamilySpec& spec = {});

std::vector<PointSet> spans_of(const std::vector<DiamondSpec>& diamonds);

}  // namespace clab::causet
