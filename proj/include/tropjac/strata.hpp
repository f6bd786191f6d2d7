#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tropjac/errors.hpp"
#include "tropjac/jacobian.hpp"

namespace tropjac {

/// One stratum of the family: the face of the base monoid, the fiber curve
/// (the closed-stratum curve contracted along the face quotient) and its
/// Jacobian data.
struct Fiber {
  std::size_t face_index = 0;
  MonoidHom proj;
  FsMonoid monoid;
  TropCurve curve;
  CurveMap from_closed;
  TropicalJacobian jacobian;
  AlignmentReport alignment;
};

/// All fibers of a curve over the face lattice of its base monoid, with the
/// generization homomorphism for every face inclusion. The fiber at the zero
/// face is the input curve; the fiber at the full face has no edges.
class StratifiedFamily {
 public:
  StratifiedFamily(const FsMonoid& base, const TropCurve& curve) : base_(base), curve_(curve) {
    if (curve.monoid() != base)
      throw basis_mismatch("curve monoid does not match the family base");
    for (const Face& f : base_.faces()) {
      auto [proj, q] = base_.quotient_by_face(f);
      auto [fiber_curve, cmap] = contract(curve_, proj, q);
      TropicalJacobian jac = tropical_jacobian(fiber_curve);
      AlignmentReport alignment = is_aligned(fiber_curve);
      fibers_.push_back(Fiber{f.index, std::move(proj), std::move(q), std::move(fiber_curve),
                              std::move(cmap), std::move(jac), std::move(alignment)});
    }
    for (std::size_t i = 0; i < fibers_.size(); ++i)
      for (std::size_t j = 0; j < fibers_.size(); ++j) {
        if (i == j || !face_leq(i, j)) continue;
        MonoidHom rel = relative_projection(fibers_[i].proj, fibers_[j].proj);
        auto [crel, cmap] = contract(fibers_[i].curve, rel, fibers_[j].monoid);
        if (!crel.same_shape(fibers_[j].curve))
          throw InternalError("StratifiedFamily: relative contraction disagrees with the fiber");
        gen_maps_.emplace(std::make_pair(i, j),
                          induced_jacobian_hom(fibers_[i].jacobian, rel, cmap,
                                               fibers_[j].jacobian));
      }
  }

  const FsMonoid& base() const { return base_; }
  const TropCurve& curve() const { return curve_; }
  const std::vector<Fiber>& fibers() const { return fibers_; }

  /// Face containment in the base lattice: every extreme ray of i's face is a
  /// ray of j's face.
  bool face_leq(std::size_t i, std::size_t j) const {
    const auto& a = base_.faces()[fibers_[i].face_index].ray_indices;
    const auto& b = base_.faces()[fibers_[j].face_index].ray_indices;
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  }

  const JacobianHom& gen_map(std::size_t i, std::size_t j) const {
    auto it = gen_maps_.find({i, j});
    if (it == gen_maps_.end()) throw InternalError("gen_map: faces are not nested");
    return it->second;
  }

 private:
  FsMonoid base_;
  TropCurve curve_;
  std::vector<Fiber> fibers_;
  std::map<std::pair<std::size_t, std::size_t>, JacobianHom> gen_maps_;
};

inline StratifiedFamily build_family(const FsMonoid& base, const TropCurve& curve) {
  return StratifiedFamily(base, curve);
}

struct FaceReport {
  std::size_t face_index = 0;
  std::vector<std::size_t> rays;
  bool aligned = true;
  FgAbGroup group;
  std::vector<Int> torsion;
  std::optional<AlignmentWitness> witness;
};

/// The combinatorial form of the separatedness theorem: three independently
/// computed booleans (alignment of every fiber; rank zero of every Jacobian;
/// torsion exhausting every Jacobian) that the theorem forces to agree.
/// Disagreement is an implementation bug and is thrown, never reported.
struct FamilyReport {
  bool aligned_everywhere = true;
  bool quasi_finite = true;
  bool saturated_equals_neron = true;
  std::vector<FaceReport> per_face;
  std::vector<std::size_t> failing_faces;
};

inline FamilyReport check_family(const StratifiedFamily& fam) {
  FamilyReport rep;
  for (const Fiber& f : fam.fibers()) {
    FaceReport fr;
    fr.face_index = f.face_index;
    fr.rays = fam.base().faces()[f.face_index].ray_indices;
    fr.aligned = f.alignment.aligned;
    fr.group = f.jacobian.group;
    fr.torsion = f.jacobian.group.invariant_factors;
    fr.witness = f.alignment.witness;
    rep.aligned_everywhere = rep.aligned_everywhere && fr.aligned;
    rep.quasi_finite = rep.quasi_finite && (fr.group.rank == 0);
    // Third route: the torsion subgroup exhausts the Jacobian iff adding the
    // torsion generators to the periods kills the whole presentation.
    const TropicalJacobian& j = f.jacobian;
    std::vector<Vec> rels = j.period_lattice.basis().row_list();
    for (const Vec& t : j.torsion_generators) rels.push_back(t);
    FgAbGroup residue = quotient(j.hom_rank(), Sublattice::from_rows(j.hom_rank(), rels));
    rep.saturated_equals_neron = rep.saturated_equals_neron && (residue.rank == 0);
    if (!fr.aligned) rep.failing_faces.push_back(f.face_index);
    rep.per_face.push_back(std::move(fr));
  }
  if (rep.aligned_everywhere != rep.quasi_finite ||
      rep.saturated_equals_neron != rep.quasi_finite)
    throw TheoremViolation(
        "alignment, rank and torsion-saturation disagree across the strata");
  return rep;
}

/// A compatible choice of a subgroup of the torsion part at every face,
/// closed under the generization maps. Elements are canonical representatives
/// modulo periods, sorted.
struct SubgroupSystem {
  std::vector<std::vector<Vec>> per_face;

  bool leq(const SubgroupSystem& o) const {
    for (std::size_t f = 0; f < per_face.size(); ++f) {
      for (const Vec& el : per_face[f]) {
        if (!std::binary_search(o.per_face[f].begin(), o.per_face[f].end(), el, lex_less))
          return false;
      }
    }
    return true;
  }

  bool operator==(const SubgroupSystem& o) const { return per_face == o.per_face; }
};

/// Per-face torsion subgroups (the saturated model's component groups) and,
/// when enumerated, every subgroup system closed under generization with its
/// inclusion order. The torsion system is always the maximum.
struct ModelClassification {
  std::vector<FgAbGroup> torsion_groups;         ///< per face
  std::vector<std::vector<Vec>> torsion_gens;    ///< per face, presentation coords
  std::optional<std::vector<SubgroupSystem>> systems;
  std::vector<std::pair<std::size_t, std::size_t>> poset;  ///< (i, j) with i < j, proper
  std::optional<std::size_t> maximum_index;
};

inline ModelClassification saturated_system(const StratifiedFamily& fam) {
  ModelClassification out;
  for (const Fiber& f : fam.fibers()) {
    auto [group, gens] = torsion_subgroup(f.jacobian);
    out.torsion_groups.push_back(group);
    out.torsion_gens.push_back(gens);
  }
  // Generization must send torsion into torsion at every step.
  for (std::size_t i = 0; i < fam.fibers().size(); ++i)
    for (std::size_t j = 0; j < fam.fibers().size(); ++j) {
      if (i == j || !fam.face_leq(i, j)) continue;
      const JacobianHom& hom = fam.gen_map(i, j);
      for (const Vec& t : out.torsion_gens[i])
        if (!fam.fibers()[j].jacobian.is_torsion(hom.apply(t)))
          throw TheoremViolation("generization does not preserve torsion");
    }
  return out;
}

namespace detail {

inline std::vector<std::string> subgroup_key(const std::vector<Vec>& elems) {
  std::vector<std::string> key;
  key.reserve(elems.size());
  for (const Vec& v : elems) key.push_back(to_string(v));
  return key;
}

/// All subgroups of a finite abelian group given by its full element list
/// (canonical reps mod periods): closure search, one new generator at a time.
inline std::vector<std::vector<Vec>> all_subgroups(const TropicalJacobian& jac,
                                                   const std::vector<Vec>& elements) {
  auto close = [&](std::vector<Vec> elems, const Vec& t) {
    std::set<std::string> have;
    for (const Vec& e : elems) have.insert(to_string(e));
    std::vector<Vec> frontier = elems;
    while (!frontier.empty()) {
      std::vector<Vec> next;
      for (const Vec& e : frontier) {
        Vec sum = jac.reduce(add(e, t));
        if (have.insert(to_string(sum)).second) {
          elems.push_back(sum);
          next.push_back(sum);
        }
      }
      frontier = std::move(next);
    }
    std::sort(elems.begin(), elems.end(), lex_less);
    return elems;
  };

  std::vector<Vec> zero_only{Vec(jac.hom_rank(), Int(0))};
  std::vector<std::vector<Vec>> found{zero_only};
  std::set<std::vector<std::string>> seen{subgroup_key(zero_only)};
  for (std::size_t at = 0; at < found.size(); ++at) {
    std::vector<Vec> current = found[at];
    std::set<std::string> have;
    for (const Vec& e : current) have.insert(to_string(e));
    for (const Vec& t : elements) {
      if (have.count(to_string(t))) continue;
      std::vector<Vec> bigger = close(current, t);
      if (seen.insert(subgroup_key(bigger)).second) found.push_back(std::move(bigger));
    }
  }
  return found;
}

}  // namespace detail

/// Classifies the separated group models: always returns the torsion system;
/// with `enumerate` also every subgroup system closed under the generization
/// maps, as a poset under componentwise inclusion. The guard bounds the
/// torsion order of any single fiber.
inline ModelClassification classify_models(const StratifiedFamily& fam, bool enumerate,
                                           std::size_t max_enum = 10000) {
  ModelClassification out = saturated_system(fam);
  if (!enumerate) return out;
  const std::size_t n = fam.fibers().size();

  std::vector<std::vector<Vec>> torsion_elements(n);
  std::vector<std::vector<std::vector<Vec>>> subgroups(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TropicalJacobian& jac = fam.fibers()[i].jacobian;
    if (jac.group.torsion_order() > static_cast<long>(max_enum))
      throw too_large_to_enumerate("torsion order exceeds the enumeration guard at a face");
    torsion_elements[i] = enumerate_subgroup(jac, out.torsion_gens[i], max_enum);
    subgroups[i] = detail::all_subgroups(jac, torsion_elements[i]);
  }

  // Backtracking over per-face subgroup choices; a choice must map into the
  // choices at every larger face already fixed (and receive correctly from
  // smaller ones).
  std::vector<SubgroupSystem> systems;
  std::vector<std::size_t> choice(n, 0);
  auto image_contained = [&](std::size_t i, std::size_t j) {
    const auto& hom = fam.gen_map(i, j);
    const TropicalJacobian& tj = fam.fibers()[j].jacobian;
    const auto& target = subgroups[j][choice[j]];
    for (const Vec& el : subgroups[i][choice[i]]) {
      Vec img = tj.reduce(hom.apply(el));
      if (!std::binary_search(target.begin(), target.end(), img, lex_less)) return false;
    }
    return true;
  };
  std::function<void(std::size_t)> assign = [&](std::size_t face) {
    if (face == n) {
      SubgroupSystem sys;
      for (std::size_t i = 0; i < n; ++i) sys.per_face.push_back(subgroups[i][choice[i]]);
      systems.push_back(std::move(sys));
      return;
    }
    for (std::size_t k = 0; k < subgroups[face].size(); ++k) {
      choice[face] = k;
      bool ok = true;
      for (std::size_t other = 0; other < face && ok; ++other) {
        if (fam.face_leq(other, face)) ok = image_contained(other, face);
        if (ok && fam.face_leq(face, other)) ok = image_contained(face, other);
      }
      if (ok) assign(face + 1);
    }
  };
  assign(0);

  // Order and locate the maximum (the torsion system).
  SubgroupSystem torsion_sys;
  for (std::size_t i = 0; i < n; ++i) torsion_sys.per_face.push_back(torsion_elements[i]);
  out.maximum_index.reset();
  for (std::size_t s = 0; s < systems.size(); ++s)
    if (systems[s] == torsion_sys) out.maximum_index = s;
  if (!out.maximum_index)
    throw TheoremViolation("the torsion system is not a closed subgroup system");
  for (std::size_t s = 0; s < systems.size(); ++s) {
    if (!systems[s].leq(torsion_sys))
      throw TheoremViolation("a subgroup system exceeds the torsion system");
    for (std::size_t t = 0; t < systems.size(); ++t)
      if (s != t && systems[s].leq(systems[t])) out.poset.emplace_back(s, t);
  }
  out.systems = std::move(systems);
  return out;
}

}  // namespace tropjac
