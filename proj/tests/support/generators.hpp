#pragma once

// Random instance generation for the property suites: sharp monoids with
// small nonnegative generators and connected multigraphs with lengths drawn
// from the monoid. Seeded deterministically by every caller.

#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "tropjac/fsmonoid.hpp"
#include "tropjac/tropcurve.hpp"

namespace generators {

using oracles::Rng;
using tropjac::FsMonoid;
using tropjac::Int;
using tropjac::TropCurve;
using tropjac::Vec;

struct MonoidParams {
  std::size_t max_rank = 3;
  std::size_t max_generators = 4;
  long max_entry = 3;
};

/// Nonnegative generators make sharpness automatic; retry until the span has
/// full rank so no re-embedding happens and coordinates stay readable.
inline FsMonoid random_monoid(Rng& rng, const MonoidParams& p = {}) {
  while (true) {
    auto r = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(p.max_rank)));
    auto k = static_cast<std::size_t>(
        rng.uniform(static_cast<long>(r), static_cast<long>(p.max_generators)));
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < k; ++i) {
      Vec g = rng.vec(r, 0, p.max_entry);
      if (!tropjac::is_zero(g)) gens.push_back(g);
    }
    if (gens.empty()) continue;
    FsMonoid m(r, gens);
    if (m.rank() == r) return m;
  }
}

/// A nonzero element of M: a small nonnegative combination of generators.
inline Vec random_length(Rng& rng, const FsMonoid& m, long max_coeff = 2) {
  while (true) {
    Vec x(m.rank(), Int(0));
    for (const Vec& g : m.generators())
      x = tropjac::add(x, tropjac::scale(Int(rng.uniform(0, max_coeff)), g));
    if (!tropjac::is_zero(x)) return x;
  }
}

struct CurveParams {
  std::size_t max_vertices = 6;
  std::size_t max_edges = 9;
  long max_length_coeff = 2;
};

/// Connected multigraph: a random spanning tree plus random extra edges
/// (loops and parallel edges included).
inline TropCurve random_curve(Rng& rng, const FsMonoid& monoid, const CurveParams& p = {}) {
  auto v = static_cast<std::size_t>(rng.uniform(1, static_cast<long>(p.max_vertices)));
  std::vector<std::string> vertices;
  for (std::size_t i = 0; i < v; ++i) vertices.push_back("v" + std::to_string(i));
  std::vector<tropjac::EdgeSpec> edges;
  std::size_t eid = 0;
  for (std::size_t i = 1; i < v; ++i) {
    auto parent = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(i) - 1));
    edges.push_back({"e" + std::to_string(eid++), vertices[parent], vertices[i],
                     random_length(rng, monoid, p.max_length_coeff)});
  }
  auto extra = static_cast<std::size_t>(
      rng.uniform(0, static_cast<long>(p.max_edges - std::min(p.max_edges, v - 1))));
  for (std::size_t i = 0; i < extra; ++i) {
    auto a = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(v) - 1));
    auto b = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(v) - 1));
    edges.push_back({"e" + std::to_string(eid++), vertices[a], vertices[b],
                     random_length(rng, monoid, p.max_length_coeff)});
  }
  return TropCurve(monoid, std::move(vertices), edges);
}

/// A curve whose every cycle-connected class lives on one extreme ray:
/// random curve, lengths rewritten per class to multiples of one ray.
inline TropCurve random_aligned_curve(Rng& rng, const FsMonoid& monoid,
                                      const CurveParams& p = {}) {
  TropCurve c = random_curve(rng, monoid, p);
  if (monoid.extreme_rays().empty()) return c;
  auto comps = tropjac::cycle_connected_components(c);
  std::vector<Vec> lengths;
  for (const auto& e : c.edges()) lengths.push_back(e.length);
  for (const auto& cls : comps.classes) {
    const Vec& ray = monoid.extreme_rays()[static_cast<std::size_t>(
        rng.uniform(0, static_cast<long>(monoid.extreme_rays().size()) - 1))];
    for (std::size_t ei : cls) lengths[ei] = tropjac::scale(Int(rng.uniform(1, 3)), ray);
  }
  std::vector<tropjac::EdgeSpec> edges;
  for (std::size_t i = 0; i < c.edge_count(); ++i) {
    const auto& e = c.edges()[i];
    edges.push_back({e.id, c.vertex_ids()[e.a], c.vertex_ids()[e.b], lengths[i]});
  }
  return TropCurve(monoid, c.vertex_ids(), edges);
}

/// All simple cycles of a small curve, as edge index sets: connected edge
/// subsets in which every incident vertex has degree exactly 2.
inline std::vector<std::vector<std::size_t>> simple_cycles(const TropCurve& c) {
  const std::size_t e = c.edge_count();
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << e); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < e; ++i)
      if (mask & (std::size_t{1} << i)) subset.push_back(i);
    std::vector<std::size_t> degree(c.vertex_count(), 0);
    for (std::size_t ei : subset) {
      degree[c.edges()[ei].a] += 1;
      degree[c.edges()[ei].b] += 1;
    }
    bool ok = true;
    for (std::size_t v = 0; v < c.vertex_count() && ok; ++v)
      if (degree[v] != 0 && degree[v] != 2) ok = false;
    if (!ok) continue;
    // Connectivity of the subset through shared vertices.
    std::vector<std::size_t> stack{subset[0]};
    std::vector<bool> seen(e, false);
    seen[subset[0]] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      for (std::size_t other : subset) {
        if (seen[other]) continue;
        const auto &x = c.edges()[cur], &y = c.edges()[other];
        if (x.a == y.a || x.a == y.b || x.b == y.a || x.b == y.b) {
          seen[other] = true;
          ++count;
          stack.push_back(other);
        }
      }
    }
    if (count == subset.size()) out.push_back(subset);
  }
  return out;
}

}  // namespace generators
