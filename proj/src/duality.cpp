#include "causal_lab/duality.hpp"

#include <algorithm>
#include <set>

#include "causal_lab/errors.hpp"

namespace clab::duality {

using causet::causal_hull;
using causet::causally_disjoint;

AlgebraBasis algebra_of_region(const Causet& c, const PointSet& region) {
  if (region.size() != c.size()) fail(ErrorCode::DimensionMismatch, "region does not match the causet size");
  return algebra_of_sites(c.size(), region);
}

bool check_net_axioms(const Causet& c, const std::vector<PointSet>& family) {
  std::vector<AlgebraBasis> algebras;
  algebras.reserve(family.size());
  for (const PointSet& r : family) algebras.push_back(algebra_of_region(c, r));
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (family[i].is_subset_of(family[j]) && !algebras[j].contains(algebras[i])) return false;
      if (i < j && causally_disjoint(c, family[i], family[j])) {
        for (const BitSet& u : algebras[i].rows()) {
          for (const BitSet& v : algebras[j].rows()) {
            if (symplectic_product(u, v)) return false;
          }
        }
      }
    }
  }
  return true;
}

namespace {

// Intersection of commutants over the given algebras; everything if none.
AlgebraBasis complement_intersection(std::size_t n, const std::vector<AlgebraBasis>& algebras) {
  AlgebraBasis rhs = AlgebraBasis::everything(n);
  for (const AlgebraBasis& a : algebras) rhs = intersect(rhs, commutant(a));
  return rhs;
}

std::vector<PauliString> extra_strings(const AlgebraBasis& rhs, const AlgebraBasis& lhs) {
  std::vector<PauliString> out;
  for (const BitSet& r : rhs.rows()) {
    if (!lhs.contains(r)) out.push_back({r});
  }
  return out;
}

}  // namespace

HaagReport haag_duality_check(const Causet& c, const PointSet& d1, const std::vector<PointSet>& family) {
  HaagReport out;
  out.lhs = algebra_of_region(c, d1);
  std::vector<AlgebraBasis> disjoint;
  for (const PointSet& d : family) {
    if (d == d1) out.d1_in_family = true;
    if (causally_disjoint(c, d, d1)) disjoint.push_back(algebra_of_region(c, d));
  }
  out.disjoint_members = disjoint.size();
  out.empty_family = disjoint.empty();
  out.rhs = complement_intersection(c.size(), disjoint);
  out.holds = out.rhs == out.lhs;
  if (!out.holds) out.witnesses = extra_strings(out.rhs, out.lhs);
  return out;
}

bool covering_oracle(const Causet& c, const PointSet& d1, const std::vector<PointSet>& family) {
  PointSet covered = c.none();
  for (const PointSet& d : family) {
    if (causally_disjoint(c, d, d1)) covered |= d;
  }
  return covered == d1.complement();
}

std::string_view to_string(PuncturedMode mode) { return mode == PuncturedMode::Ambient ? "ambient" : "excised"; }

PuncturedReport punctured_hd_check(const Causet& c, const PointSet& d1, std::size_t p,
                                   const std::vector<PointSet>& family, PuncturedMode mode) {
  if (p >= c.size()) fail(ErrorCode::InvalidArgument, "point out of range");
  PointSet single = c.none();
  single.set(p);
  const PointSet shadow = causal_hull(c, single);
  if (d1.intersects(shadow)) fail(ErrorCode::PreconditionShadow, "D1 meets J(p)");
  const PointSet avoid = d1 | single;

  PuncturedReport out;
  out.mode = mode;
  std::vector<PointSet> disjoint;
  for (const PointSet& d : family) {
    if (causally_disjoint(c, d, avoid)) disjoint.push_back(d);
  }
  out.disjoint_members = disjoint.size();
  out.empty_family = disjoint.empty();

  if (mode == PuncturedMode::Ambient) {
    const std::size_t n = c.size();
    out.sites = n;
    out.lhs = algebra_of_region(c, d1);
    std::vector<AlgebraBasis> algebras;
    for (const PointSet& d : disjoint) algebras.push_back(algebra_of_region(c, d));
    out.rhs = complement_intersection(n, algebras);
    out.holds = out.rhs == out.lhs;
    if (!out.holds) {
      // Single-site strings inside J(p) first: they are the expected survivors.
      shadow.for_each([&](std::size_t s) {
        for (const PauliString& w : {PauliString::x_at(n, s), PauliString::z_at(n, s)}) {
          if (out.rhs.contains(w.bits) && !out.lhs.contains(w.bits)) out.witnesses.push_back(w);
        }
      });
      out.witness_in_shadow = !out.witnesses.empty();
      if (out.witnesses.empty()) out.witnesses = extra_strings(out.rhs, out.lhs);
    }
    return out;
  }

  const causet::Excision e = causet::excise(c, p);
  const std::size_t m = e.causet.size();
  out.sites = m;
  out.lhs = algebra_of_sites(m, e.from_ambient_set(d1));
  std::vector<AlgebraBasis> algebras;
  for (const PointSet& d : disjoint) algebras.push_back(algebra_of_sites(m, e.from_ambient_set(d)));
  out.rhs = complement_intersection(m, algebras);
  out.holds = out.rhs == out.lhs;
  if (!out.holds) {
    for (const PauliString& w : extra_strings(out.rhs, out.lhs)) {
      PauliString lifted = PauliString::identity(c.size());
      w.bits.for_each([&](std::size_t i) {
        lifted.bits.set(i < m ? e.to_ambient[i] : c.size() + e.to_ambient[i - m]);
      });
      out.witnesses.push_back(std::move(lifted));
    }
  }
  return out;
}

LocalDefinitenessReport local_definiteness_check(const Causet& c, std::size_t p, const std::vector<PointSet>& family) {
  if (p >= c.size()) fail(ErrorCode::InvalidArgument, "point out of range");
  LocalDefinitenessReport out;
  std::optional<AlgebraBasis> meet;
  PointSet common = c.all();
  for (const PointSet& d : family) {
    if (!d.test(p)) continue;
    ++out.containing;
    const AlgebraBasis a = algebra_of_region(c, d);
    meet = meet ? intersect(*meet, a) : a;
    common &= d;
  }
  if (!meet) fail(ErrorCode::NoContainingDiamond, "no family member contains the point");
  out.intersection = std::move(*meet);
  out.floor = algebra_of_region(c, common);
  out.minimal = out.intersection == out.floor;
  return out;
}

OuterRegularityReport outer_regularity_check(const Causet& c, const PointSet& d1, const std::vector<PointSet>& family,
                                             int buffer_steps) {
  const PointSet buffer = causet::hasse_buffer(c, d1, buffer_steps);
  OuterRegularityReport out;
  std::optional<AlgebraBasis> meet;
  PointSet common = c.all();
  for (const PointSet& d : family) {
    if (d == d1 || !buffer.is_subset_of(d)) continue;
    ++out.supersets;
    const AlgebraBasis a = algebra_of_region(c, d);
    meet = meet ? intersect(*meet, a) : a;
    common &= d;
  }
  if (!meet) fail(ErrorCode::NoSuperset, "no family member strictly contains the buffer of D1");
  out.intersection = std::move(*meet);
  out.matches_floor = out.intersection == algebra_of_region(c, common);
  out.holds = out.intersection == algebra_of_region(c, d1);
  return out;
}

GenerationReport generation_check(const Causet& c, const causet::FamilyOptions& options) {
  GenerationReport out;
  const std::size_t n = c.size();
  if (n < 2) return out;
  std::vector<PointSet> regions = causet::convex_region_family(c, options).regions;
  // Singletons are convex regions; include them so sampling cannot miss a point.
  for (std::size_t i = 0; i < n; ++i) {
    PointSet s = c.none();
    s.set(i);
    regions.push_back(std::move(s));
  }
  AlgebraBasis total(n);
  PointSet covered = c.none();
  const PointSet everything = c.all();
  for (const PointSet& r : regions) {
    if (r == everything) continue;
    ++out.regions;
    total = sum(total, algebra_of_region(c, r));
    covered |= r;
  }
  out.holds = total == AlgebraBasis::everything(n);
  out.covered = covered == everything;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<DiamondSpec> shared_diamonds(const std::vector<DiamondSpec>& fam_a, const std::vector<DiamondSpec>& fam_b) {
  std::set<PointSet> spans_b;
  for (const DiamondSpec& d : fam_b) spans_b.insert(d.span);
  std::set<PointSet> taken;
  std::vector<DiamondSpec> out;
  for (const DiamondSpec& d : fam_a) {
    if (spans_b.count(d.span) != 0 && taken.insert(d.span).second) out.push_back(d);
  }
  return out;
}

BridgeReport cofinality_bridge(const Causet& c, std::size_t p, const std::vector<DiamondSpec>& fam_a,
                               const std::vector<DiamondSpec>& fam_b, const std::vector<DiamondSpec>& fam_shared) {
  if (p >= c.size()) fail(ErrorCode::InvalidArgument, "point out of range");
  const causet::Excision e = causet::excise(c, p);
  const std::size_t m = e.causet.size();
  PointSet single = c.none();
  single.set(p);
  const PointSet shadow = causal_hull(c, single);

  BridgeReport out;
  out.shared = fam_shared.size();
  for (const DiamondSpec& shared : fam_shared) {
    const PointSet& d1 = shared.span;
    if (d1.intersects(shadow)) continue;
    ++out.compared;
    const PointSet avoid = d1 | single;
    const PointSet outer = causal_hull(c, avoid).complement();

    BridgeEntry entry;
    entry.d1 = d1;
    PointSet cover_a = c.none();
    PointSet cover_b = c.none();
    std::vector<const DiamondSpec*> disj_a;
    std::vector<const DiamondSpec*> disj_b;
    // The intersection of commutants is the commutant of the joint span;
    // one reduction instead of one Zassenhaus step per member.
    auto collect = [&](const std::vector<DiamondSpec>& fam, PointSet& cover, std::vector<const DiamondSpec*>& disj,
                       AlgebraBasis& rhs) {
      std::vector<BitSet> gens;
      for (const DiamondSpec& d : fam) {
        if (!causally_disjoint(c, d.span, avoid)) continue;
        disj.push_back(&d);
        cover |= d.span;
        const AlgebraBasis a = algebra_of_sites(m, e.from_ambient_set(d.span));
        gens.insert(gens.end(), a.rows().begin(), a.rows().end());
      }
      rhs = commutant(AlgebraBasis::span(m, gens));
    };
    collect(fam_a, cover_a, disj_a, entry.rhs_a);
    collect(fam_b, cover_b, disj_b, entry.rhs_b);
    entry.covered_only_a = cover_a - cover_b;
    entry.covered_only_b = cover_b - cover_a;

    // Interpolation attempts; failures on members covering a discrepancy
    // point explain it.
    bool explained_a = entry.covered_only_a.none();
    bool explained_b = entry.covered_only_b.none();
    auto attempt = [&](const std::vector<const DiamondSpec*>& disj, const PointSet& only, bool& explained) {
      for (const DiamondSpec* d : disj) {
        ++out.interpolation_attempts;
        const causet::InterpolationResult r = causet::interpolate_diamond(c, *d, outer, fam_shared);
        if (r.ok()) continue;
        ++out.interpolation_failures;
        if (d->span.intersects(only)) {
          entry.explanations.push_back(*r.failure);
          explained = true;
        }
      }
    };
    attempt(disj_a, entry.covered_only_a, explained_a);
    attempt(disj_b, entry.covered_only_b, explained_b);

    if (entry.rhs_a != entry.rhs_b) {
      out.all_equal = false;
      if (!explained_a || !explained_b) out.unexplained = true;
      out.discrepancies.push_back(std::move(entry));
    }
  }
  return out;
}

}  // namespace clab::duality
