#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tropjac/errors.hpp"
#include "tropjac/fsmonoid.hpp"
#include "tropjac/tropcurve.hpp"
#include "tropjac/zlinalg.hpp"

namespace tropjac {

/// The symmetric M^gp-valued pairing on H1 in a fundamental cycle basis:
/// <e, f> = l(e) if e = f and 0 otherwise, extended bilinearly. Diagonal
/// entries are cycle lengths and lie in M.
struct MonodromyPairing {
  std::size_t h = 0;  ///< cycle rank
  std::size_t r = 0;  ///< monoid rank
  std::vector<std::vector<Vec>> table;  ///< h x h entries in Z^r

  const Vec& at(std::size_t i, std::size_t j) const { return table[i][j]; }
};

inline MonodromyPairing monodromy_pairing(const TropCurve& c, const CycleBasis& b) {
  if (b.cycles.cols() != c.edge_count()) throw basis_mismatch("cycle basis does not fit the curve");
  MonodromyPairing p;
  p.h = b.rank();
  p.r = c.monoid().rank();
  p.table.assign(p.h, std::vector<Vec>(p.h, Vec(p.r, Int(0))));
  for (std::size_t i = 0; i < p.h; ++i)
    for (std::size_t j = i; j < p.h; ++j) {
      Vec sum(p.r, Int(0));
      for (std::size_t e = 0; e < c.edge_count(); ++e) {
        Int coef = b.cycles.at(i, e) * b.cycles.at(j, e);
        if (coef == 0) continue;
        for (std::size_t t = 0; t < p.r; ++t) sum[t] += coef * c.edges()[e].length[t];
      }
      p.table[i][j] = sum;
      p.table[j][i] = sum;
    }
  return p;
}

/// Self-intersection of a cycle (given in basis coordinates); an element of M.
inline Vec cycle_length(const MonodromyPairing& p, const Vec& gamma) {
  if (gamma.size() != p.h) throw basis_mismatch("cycle coordinates have wrong length");
  Vec out(p.r, Int(0));
  for (std::size_t i = 0; i < p.h; ++i)
    for (std::size_t j = 0; j < p.h; ++j) {
      Int coef = gamma[i] * gamma[j];
      if (coef == 0) continue;
      for (std::size_t t = 0; t < p.r; ++t) out[t] += coef * p.at(i, j)[t];
    }
  return out;
}

/// The lattice of bounded-monodromy homomorphisms Hom(H1, M^gp)^dagger inside
/// Z^(h*r). A hom phi is stored as the h x r matrix with row i = phi(basis
/// cycle i), flattened row-major.
struct BoundedHomLattice {
  std::size_t h = 0;
  std::size_t r = 0;
  Sublattice lattice;

  BoundedHomLattice() : lattice(0) {}
};

inline Vec flatten_hom(const IntMatrix& phi) {
  Vec out;
  out.reserve(phi.rows() * phi.cols());
  for (std::size_t i = 0; i < phi.rows(); ++i)
    for (std::size_t j = 0; j < phi.cols(); ++j) out.push_back(phi.at(i, j));
  return out;
}

inline IntMatrix unflatten_hom(const Vec& flat, std::size_t h, std::size_t r) {
  if (flat.size() != h * r) throw InternalError("unflatten_hom: size mismatch");
  IntMatrix phi(h, r);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < r; ++j) phi.at(i, j) = flat[i * r + j];
  return phi;
}

/// Bounded monodromy via the face criterion: phi is bounded iff for every
/// face F of M, phi maps every cycle supported on edges with length in F into
/// F^gp. The per-cycle definition quantifies over all of H1; it collapses to
/// this finite intersection because the length of a cycle generates the same
/// face as the lengths of its support.
inline BoundedHomLattice bounded_monodromy_lattice(const TropCurve& c, const CycleBasis& basis) {
  BoundedHomLattice out;
  out.h = basis.rank();
  out.r = c.monoid().rank();
  const std::size_t hr = out.h * out.r;
  out.lattice = Sublattice::full(hr);
  if (out.h == 0 || out.r == 0) return out;

  IntMatrix delta = boundary_matrix(c);
  for (const Face& f : c.monoid().faces()) {
    if (f.span.rank() == c.monoid().rank()) continue;  // the full face constrains nothing
    std::vector<std::size_t> edges_in_face;
    for (std::size_t e = 0; e < c.edge_count(); ++e) {
      bool in_face = true;
      for (std::size_t ni : f.active_facets)
        if (dot(c.monoid().facet_normals()[ni], c.edges()[e].length) != 0) {
          in_face = false;
          break;
        }
      if (in_face) edges_in_face.push_back(e);
    }
    if (edges_in_face.empty()) continue;

    // Cycles supported on the face's edge set, in basis coordinates.
    IntMatrix delta_f(c.vertex_count(), edges_in_face.size());
    for (std::size_t k = 0; k < edges_in_face.size(); ++k)
      for (std::size_t v = 0; v < c.vertex_count(); ++v)
        delta_f.at(v, k) = delta.at(v, edges_in_face[k]);
    Sublattice cyc = kernel(delta_f);
    if (cyc.rank() == 0) continue;
    IntMatrix coeff(cyc.rank(), out.h);
    for (std::size_t s = 0; s < cyc.rank(); ++s) {
      Vec full(c.edge_count(), Int(0));
      for (std::size_t k = 0; k < edges_in_face.size(); ++k)
        full[edges_in_face[k]] = cyc.basis().at(s, k);
      Vec coords = basis.coordinates(full);
      for (std::size_t i = 0; i < out.h; ++i) coeff.at(s, i) = coords[i];
    }

    // phi |-> (phi(a_1), ..., phi(a_k)) as a map Z^(h*r) -> Z^(k*r), with the
    // block-diagonal target F^gp + ... + F^gp.
    IntMatrix m(cyc.rank() * out.r, hr);
    for (std::size_t s = 0; s < cyc.rank(); ++s)
      for (std::size_t j = 0; j < out.r; ++j)
        for (std::size_t i = 0; i < out.h; ++i)
          m.at(s * out.r + j, i * out.r + j) = coeff.at(s, i);
    std::vector<Vec> target_rows;
    for (std::size_t s = 0; s < cyc.rank(); ++s)
      for (std::size_t w = 0; w < f.span.rank(); ++w) {
        Vec row(cyc.rank() * out.r, Int(0));
        for (std::size_t j = 0; j < out.r; ++j)
          row[s * out.r + j] = f.span.basis().at(w, j);
        target_rows.push_back(row);
      }
    Sublattice target = Sublattice::from_rows(cyc.rank() * out.r, target_rows);
    out.lattice = lattice_intersection(out.lattice, preimage_lattice(m, target));
  }
  return out;
}

inline BoundedHomLattice bounded_monodromy_lattice(const TropCurve& c) {
  return bounded_monodromy_lattice(c, h1_basis(c));
}

/// Membership of a hom (as an h x r matrix) in the bounded lattice.
inline bool is_bounded(const TropCurve& c, const IntMatrix& phi) {
  CycleBasis basis = h1_basis(c);
  if (phi.rows() != basis.rank() || phi.cols() != c.monoid().rank())
    throw basis_mismatch("hom matrix has wrong shape");
  BoundedHomLattice l = bounded_monodromy_lattice(c, basis);
  return l.lattice.contains(flatten_hom(phi));
}

/// The tropical Jacobian Hom(H1, M^gp)^dagger / H1 with an explicit
/// presentation: hom_basis rows (the HNF basis of the bounded lattice) are
/// the generators, and the period of each basis cycle is expressed in those
/// coordinates. All choices are deterministic, so equal curves give
/// byte-equal presentations.
struct TropicalJacobian {
  FgAbGroup group;
  CycleBasis basis;
  MonodromyPairing pairing;
  BoundedHomLattice hom;
  IntMatrix periods;           ///< h x R, R = hom rank
  Sublattice period_lattice;   ///< span of the period rows in Z^R
  Sublattice period_saturation;
  std::vector<Vec> torsion_generators;  ///< hom-basis coordinates

  TropicalJacobian() : period_lattice(0), period_saturation(0) {}

  std::size_t hom_rank() const { return hom.lattice.rank(); }

  /// Canonical representative of a presentation vector modulo periods.
  Vec reduce(const Vec& x) const { return period_lattice.reduce(x); }

  bool is_zero_class(const Vec& x) const { return is_zero(reduce(x)); }

  /// Torsion test: x is torsion iff some multiple lies in the period span.
  bool is_torsion(const Vec& x) const { return period_saturation.contains(x); }
};

inline TropicalJacobian tropical_jacobian(const TropCurve& c) {
  TropicalJacobian j;
  j.basis = h1_basis(c);
  j.pairing = monodromy_pairing(c, j.basis);
  j.hom = bounded_monodromy_lattice(c, j.basis);
  const std::size_t h = j.basis.rank(), R = j.hom.lattice.rank();

  j.periods = IntMatrix(h, R);
  for (std::size_t i = 0; i < h; ++i) {
    Vec flat;
    flat.reserve(h * j.pairing.r);
    for (std::size_t k = 0; k < h; ++k)
      for (std::size_t t = 0; t < j.pairing.r; ++t) flat.push_back(j.pairing.at(i, k)[t]);
    auto coords = j.hom.lattice.coordinates(flat);
    if (!coords)
      throw InternalError("tropical_jacobian: a period functional is not bounded");
    for (std::size_t k = 0; k < R; ++k) j.periods.at(i, k) = (*coords)[k];
  }
  j.period_lattice = Sublattice::from_generators(R, j.periods);
  j.period_saturation = saturate(j.period_lattice);
  j.group = quotient(R, j.period_lattice);

  // Torsion generators from the Smith coordinates of the period matrix.
  SnfResult s = snf(j.periods);
  IntMatrix w = inverse_unimodular(s.v);
  const std::size_t n = std::min(s.d.rows(), s.d.cols());
  for (std::size_t i = 0; i < n; ++i)
    if (s.d.at(i, i) >= 2) j.torsion_generators.push_back(w.row(i));
  return j;
}

/// The torsion part of the Jacobian with explicit generators in presentation
/// coordinates.
inline std::pair<FgAbGroup, std::vector<Vec>> torsion_subgroup(const TropicalJacobian& j) {
  FgAbGroup t;
  t.rank = 0;
  t.invariant_factors = j.group.invariant_factors;
  return {t, j.torsion_generators};
}

struct AlignmentWitness {
  Vec cycle;                          ///< in Z^E
  std::vector<std::string> edge_ids;  ///< one edge off every ray, or two on distinct rays
};

struct AlignmentReport {
  bool aligned = true;
  std::optional<AlignmentWitness> witness;
};

namespace detail {

/// Chain of a walk between two vertices using only the allowed edges
/// (traversals against the stored orientation count -1). Nullopt if no walk
/// exists.
inline std::optional<Vec> walk_chain(const TropCurve& c, const std::vector<std::size_t>& allowed,
                                     std::size_t from, std::size_t to) {
  const std::size_t V = c.vertex_count();
  std::vector<std::optional<std::pair<std::size_t, bool>>> via(V);  // (edge, forward)
  std::vector<bool> seen(V, false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty() && !seen[to]) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t ei : allowed) {
      const Edge& e = c.edges()[ei];
      if (e.a == v && !seen[e.b]) {
        seen[e.b] = true;
        via[e.b] = {{ei, true}};
        queue.push_back(e.b);
      }
      if (e.b == v && !seen[e.a]) {
        seen[e.a] = true;
        via[e.a] = {{ei, false}};
        queue.push_back(e.a);
      }
    }
  }
  if (!seen[to]) return std::nullopt;
  Vec chain(c.edge_count(), Int(0));
  std::size_t v = to;
  while (v != from) {
    auto [ei, fwd] = *via[v];
    chain[ei] += fwd ? 1 : -1;
    v = fwd ? c.edges()[ei].a : c.edges()[ei].b;
  }
  return chain;
}

/// A cycle (in Z^E) through the non-bridge edge e, inside its class.
inline Vec cycle_through(const TropCurve& c, const std::vector<std::size_t>& class_edges,
                         std::size_t e) {
  std::vector<std::size_t> allowed;
  for (std::size_t ei : class_edges)
    if (ei != e) allowed.push_back(ei);
  auto path = walk_chain(c, allowed, c.edges()[e].b, c.edges()[e].a);
  if (!path) throw InternalError("cycle_through: class edge has no return path");
  Vec cycle = *path;
  cycle[e] += 1;
  return cycle;
}

/// A cycle (in Z^E) through two edges of one cycle-connected class. One of
/// the two end-matchings always admits connecting walks.
inline Vec cycle_through_pair(const TropCurve& c, const std::vector<std::size_t>& class_edges,
                              std::size_t e, std::size_t f) {
  std::vector<std::size_t> allowed;
  for (std::size_t ei : class_edges)
    if (ei != e && ei != f) allowed.push_back(ei);
  const Edge &ee = c.edges()[e], &ff = c.edges()[f];
  std::optional<Vec> best;
  Int best_weight = 0;
  auto offer = [&](const Vec& chain) {
    Int weight = 0;
    for (const Int& x : chain) weight += abs(x);
    if (!best || weight < best_weight) {
      best = chain;
      best_weight = weight;
    }
  };
  // e then f forward: a_e -> b_e ~> a_f -> b_f ~> a_e
  auto p1 = walk_chain(c, allowed, ee.b, ff.a);
  auto p2 = walk_chain(c, allowed, ff.b, ee.a);
  if (p1 && p2) {
    Vec cycle = add(*p1, *p2);
    cycle[e] += 1;
    cycle[f] += 1;
    offer(cycle);
  }
  // e forward, f backward: a_e -> b_e ~> b_f -> a_f ~> a_e
  auto q1 = walk_chain(c, allowed, ee.b, ff.b);
  auto q2 = walk_chain(c, allowed, ff.a, ee.a);
  if (q1 && q2) {
    Vec cycle = add(*q1, *q2);
    cycle[e] += 1;
    cycle[f] -= 1;
    offer(cycle);
  }
  if (!best)
    throw InternalError("cycle_through_pair: no connecting walks in a cycle-connected class");
  return *best;
}

}  // namespace detail

/// Log alignment: every cycle's edge lengths lie on one extreme ray. Decided
/// per cycle-connected class: any two edges of a class share a simple cycle,
/// so the per-cycle and per-class conditions agree. Bridges lie on no cycle
/// and are exempt.
inline AlignmentReport is_aligned(const TropCurve& c) {
  CycleComponents comps = cycle_connected_components(c);
  for (const std::vector<std::size_t>& cls : comps.classes) {
    std::optional<std::size_t> common_ray;
    std::optional<std::size_t> first_edge;
    for (std::size_t ei : cls) {
      auto ray = c.monoid().ray_through(c.edges()[ei].length);
      if (!ray) {
        AlignmentReport rep;
        rep.aligned = false;
        rep.witness = AlignmentWitness{detail::cycle_through(c, cls, ei), {c.edges()[ei].id}};
        return rep;
      }
      if (!common_ray) {
        common_ray = ray->first;
        first_edge = ei;
      } else if (*common_ray != ray->first) {
        AlignmentReport rep;
        rep.aligned = false;
        rep.witness = AlignmentWitness{detail::cycle_through_pair(c, cls, *first_edge, ei),
                                       {c.edges()[*first_edge].id, c.edges()[ei].id}};
        return rep;
      }
    }
  }
  return {};
}

/// One summand of an aligned Jacobian: a cycle-connected class whose lengths
/// all lie on N * ray, recomputed as a curve over N with integer lengths.
struct AlignedComponent {
  std::vector<std::string> edge_ids;
  Vec ray;  ///< primitive generator of the common extreme ray, in M
  TropCurve curve;
  TropicalJacobian jacobian;
};

inline std::vector<AlignedComponent> aligned_decomposition(const TropCurve& c) {
  if (!is_aligned(c).aligned)
    throw not_aligned("aligned_decomposition requires an aligned curve");
  std::vector<AlignedComponent> out;
  for (const std::vector<std::size_t>& cls : cycle_connected_components(c).classes) {
    auto ray = c.monoid().ray_through(c.edges()[cls[0]].length);
    if (!ray) throw InternalError("aligned_decomposition: class edge off every ray");
    std::vector<bool> keep_vertex(c.vertex_count(), false);
    for (std::size_t ei : cls) {
      keep_vertex[c.edges()[ei].a] = true;
      keep_vertex[c.edges()[ei].b] = true;
    }
    std::vector<std::string> vertices;
    for (std::size_t v = 0; v < c.vertex_count(); ++v)
      if (keep_vertex[v]) vertices.push_back(c.vertex_ids()[v]);
    std::vector<EdgeSpec> edges;
    std::vector<std::string> ids;
    for (std::size_t ei : cls) {
      const Edge& e = c.edges()[ei];
      auto on_ray = c.monoid().ray_through(e.length);
      if (!on_ray || on_ray->first != ray->first)
        throw InternalError("aligned_decomposition: class edges disagree on the ray");
      edges.push_back(
          EdgeSpec{e.id, c.vertex_ids()[e.a], c.vertex_ids()[e.b], Vec{on_ray->second}});
      ids.push_back(e.id);
    }
    TropCurve sub(FsMonoid::free(1), std::move(vertices), edges);
    TropicalJacobian jac = tropical_jacobian(sub);
    out.push_back(AlignedComponent{std::move(ids), c.monoid().extreme_rays()[ray->first],
                                   std::move(sub), std::move(jac)});
  }
  return out;
}

/// A group homomorphism between presented Jacobians, as a matrix on hom-basis
/// coordinates (rows = images of the source basis vectors). Descends to the
/// quotients because periods map to periods.
struct JacobianHom {
  IntMatrix matrix;  ///< R_src x R_tgt

  Vec apply(const Vec& coords) const { return matrix.apply_left(coords); }
};

/// The homomorphism TroPic0(c) -> TroPic0(c_phi) induced by a monoid
/// homomorphism: lift a class to a bounded hom, push cycles forward along the
/// (contraction or subdivision) map, apply the monoid hom to values. Bounded
/// monodromy makes the descent independent of the chosen H1 section.
inline JacobianHom induced_jacobian_hom(const TropicalJacobian& src, const MonoidHom& hom,
                                        const CurveMap& cmap, const TropicalJacobian& tgt) {
  const std::size_t hs = src.basis.rank(), ht = tgt.basis.rank();
  const std::size_t rs = src.pairing.r;
  IntMatrix p = pushforward_cycles(cmap, src.basis, tgt.basis);

  IntMatrix section(ht, hs);
  for (std::size_t j = 0; j < ht; ++j) {
    Vec unit(ht, Int(0));
    unit[j] = 1;
    auto s = solve_left(p, unit);
    if (!s) throw InternalError("induced_jacobian_hom: H1 pushforward is not surjective");
    for (std::size_t i = 0; i < hs; ++i) section.at(j, i) = (*s)[i];
  }

  IntMatrix qt = hom.matrix.transpose();  // r_src x r_tgt
  JacobianHom out;
  out.matrix = IntMatrix(src.hom_rank(), tgt.hom_rank());
  for (std::size_t row = 0; row < src.hom_rank(); ++row) {
    IntMatrix phi = unflatten_hom(src.hom.lattice.basis().row(row), hs, rs);
    IntMatrix psi = mul(mul(section, phi), qt);
    auto coords = tgt.hom.lattice.coordinates(flatten_hom(psi));
    if (!coords)
      throw InternalError("induced_jacobian_hom: descended hom is not bounded");
    for (std::size_t k = 0; k < tgt.hom_rank(); ++k) out.matrix.at(row, k) = (*coords)[k];
  }
  return out;
}

/// Generization along a face of the base monoid: contract the curve by the
/// face quotient and carry the Jacobian along.
struct Generization {
  MonoidHom proj;
  FsMonoid quotient_monoid;
  TropCurve curve;
  CurveMap map;
  TropicalJacobian jacobian;
  JacobianHom hom;
};

inline Generization generization_map(const TropCurve& c, const TropicalJacobian& jac,
                                     const Face& f) {
  auto [proj, q] = c.monoid().quotient_by_face(f);
  auto [curve, cmap] = contract(c, proj, q);
  TropicalJacobian tjac = tropical_jacobian(curve);
  JacobianHom hom = induced_jacobian_hom(jac, proj, cmap, tjac);
  return Generization{std::move(proj), std::move(q),      std::move(curve),
                      std::move(cmap), std::move(tjac), std::move(hom)};
}

/// Enumerates the subgroup generated by the given presentation vectors,
/// as canonical representatives mod periods. Every generator must be torsion.
inline std::vector<Vec> enumerate_subgroup(const TropicalJacobian& jac,
                                           const std::vector<Vec>& generators,
                                           std::size_t max_elements) {
  std::map<std::vector<std::string>, Vec> seen;
  auto key = [](const Vec& v) {
    std::vector<std::string> k;
    k.reserve(v.size());
    for (const Int& x : v) k.push_back(x.get_str());
    return k;
  };
  Vec zero(jac.hom_rank(), Int(0));
  seen.emplace(key(zero), zero);
  std::deque<Vec> queue{zero};
  while (!queue.empty()) {
    Vec cur = queue.front();
    queue.pop_front();
    for (const Vec& g : generators) {
      Vec next = jac.reduce(add(cur, g));
      if (seen.emplace(key(next), next).second) {
        if (seen.size() > max_elements)
          throw too_large_to_enumerate("subgroup exceeds the enumeration guard");
        queue.push_back(next);
      }
    }
  }
  std::vector<Vec> out;
  for (auto& [k, v] : seen) out.push_back(v);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

/// Whether the composite of a finite subgroup with TroPic0(c) ->
/// TroPic0(c_phi) is injective, for a functional phi: M -> N contracting no
/// edge. By the free-kernel lemma this always holds when the subgroup is
/// finite; the test verifies it element by element.
inline bool injectivity_test(const TropCurve& c, const TropicalJacobian& jac,
                             const std::vector<Vec>& subgroup_gens, const MonoidHom& phi,
                             std::size_t max_elements = 100000) {
  FsMonoid n = FsMonoid::free(1);
  if (!c.monoid().hom_maps_into(phi.matrix, n))
    throw hom_not_monoid_map("functional does not map the monoid into N");
  for (const Edge& e : c.edges())
    if (is_zero(phi(e.length)))
      throw contracts_an_edge("functional kills the length of edge '" + e.id + "'");
  for (const Vec& g : subgroup_gens) {
    if (g.size() != jac.hom_rank()) throw basis_mismatch("subgroup generator has wrong length");
    if (!jac.is_torsion(g))
      throw not_finite_subgroup("generator is not torsion, the subgroup is infinite");
  }
  auto [curve, cmap] = contract(c, phi, n);
  TropicalJacobian tjac = tropical_jacobian(curve);
  JacobianHom hom = induced_jacobian_hom(jac, phi, cmap, tjac);
  for (const Vec& el : enumerate_subgroup(jac, subgroup_gens, max_elements)) {
    if (jac.is_zero_class(el)) continue;
    if (tjac.is_zero_class(hom.apply(el))) return false;
  }
  return true;
}

}  // namespace tropjac
