#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tropjac/errors.hpp"
#include "tropjac/fsmonoid.hpp"
#include "tropjac/zlinalg.hpp"

namespace tropjac {

struct EdgeSpec {
  std::string id;
  std::string end_a;
  std::string end_b;
  Vec length;
};

struct Edge {
  std::string id;
  std::size_t a;  ///< tail vertex index (the stored orientation is a -> b)
  std::size_t b;  ///< head vertex index
  Vec length;

  bool is_loop() const { return a == b; }
};

/// How a curve operation rewrote the graph. For contractions each old edge is
/// either kept (new index) or contracted; for subdivisions the replaced edge
/// maps to its ordered pieces.
struct CurveMap {
  enum class Kind { contraction, subdivision };
  Kind kind = Kind::contraction;
  std::vector<std::optional<std::size_t>> edge_image;  ///< contraction: old -> new or contracted
  std::vector<std::vector<std::size_t>> edge_pieces;   ///< subdivision: old -> ordered new edges
  std::vector<std::size_t> vertex_image;               ///< old vertex -> new vertex
};

/// A finite connected multigraph (loops and parallel edges allowed) with
/// edge lengths in M minus 0 and the fixed per-edge orientation a -> b.
/// Immutable after construction.
class TropCurve {
 public:
  TropCurve(FsMonoid monoid, std::vector<std::string> vertex_ids, const std::vector<EdgeSpec>& edges)
      : monoid_(std::move(monoid)), vertex_ids_(std::move(vertex_ids)) {
    std::map<std::string, std::size_t> vindex;
    for (std::size_t i = 0; i < vertex_ids_.size(); ++i) {
      if (!vindex.emplace(vertex_ids_[i], i).second)
        throw duplicate_id("vertex id '" + vertex_ids_[i] + "' appears twice");
    }
    std::map<std::string, std::size_t> eindex;
    for (const EdgeSpec& e : edges) {
      if (!eindex.emplace(e.id, edges_.size()).second)
        throw duplicate_id("edge id '" + e.id + "' appears twice");
      auto a = vindex.find(e.end_a);
      auto b = vindex.find(e.end_b);
      if (a == vindex.end() || b == vindex.end())
        throw dangling_endpoint("edge '" + e.id + "' references an unknown vertex");
      if (e.length.size() != monoid_.rank())
        throw dimension_mismatch("edge '" + e.id + "' has a length of wrong rank");
      if (is_zero(e.length)) throw zero_length("edge '" + e.id + "' has length 0");
      if (!monoid_.contains(e.length))
        throw length_not_in_monoid("edge '" + e.id + "' has length outside the monoid");
      edges_.push_back(Edge{e.id, a->second, b->second, e.length});
    }
    if (vertex_ids_.empty()) throw disconnected("curve has no vertices");
    check_connected();
  }

  const FsMonoid& monoid() const { return monoid_; }
  const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t vertex_count() const { return vertex_ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  std::optional<std::size_t> edge_index(const std::string& id) const {
    for (std::size_t i = 0; i < edges_.size(); ++i)
      if (edges_[i].id == id) return i;
    return std::nullopt;
  }

  /// First Betti number E - V + 1.
  std::size_t cycle_rank() const { return edges_.size() - vertex_ids_.size() + 1; }

  bool same_shape(const TropCurve& o) const {
    if (vertex_ids_ != o.vertex_ids_ || edges_.size() != o.edges_.size()) return false;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge &e = edges_[i], &f = o.edges_[i];
      if (e.id != f.id || e.a != f.a || e.b != f.b || e.length != f.length) return false;
    }
    return true;
  }

 private:
  void check_connected() const {
    std::vector<bool> seen(vertex_ids_.size(), false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (const Edge& e : edges_) {
        if (e.a == v && !seen[e.b]) {
          seen[e.b] = true;
          queue.push_back(e.b);
        }
        if (e.b == v && !seen[e.a]) {
          seen[e.a] = true;
          queue.push_back(e.a);
        }
      }
    }
    for (bool s : seen)
      if (!s) throw disconnected("curve graph is not connected");
  }

  FsMonoid monoid_;
  std::vector<std::string> vertex_ids_;
  std::vector<Edge> edges_;
};

/// V x E incidence matrix: the column of edge e is endpoint minus startpoint
/// (zero for loops).
inline IntMatrix boundary_matrix(const TropCurve& c) {
  IntMatrix m(c.vertex_count(), c.edge_count());
  for (std::size_t j = 0; j < c.edge_count(); ++j) {
    const Edge& e = c.edges()[j];
    m.at(e.b, j) += 1;
    m.at(e.a, j) -= 1;
  }
  return m;
}

/// Fundamental cycle basis of ker(boundary matrix) for the deterministic
/// spanning tree: BFS from the lexicographically least vertex id, scanning
/// edges in id order. The row of a non-tree edge e has coefficient +1 at e.
struct CycleBasis {
  std::vector<std::size_t> tree_edges;     ///< edge indices, ascending
  std::vector<std::size_t> nontree_edges;  ///< edge indices, ascending; one row each
  IntMatrix cycles;                        ///< h x E

  std::size_t rank() const { return cycles.rows(); }

  /// Coordinates of a cycle z in this basis: its coefficients at the
  /// non-tree edges.
  Vec coordinates(const Vec& z) const {
    Vec out(nontree_edges.size());
    for (std::size_t i = 0; i < nontree_edges.size(); ++i) out[i] = z[nontree_edges[i]];
    return out;
  }
};

inline CycleBasis h1_basis(const TropCurve& c) {
  const std::size_t V = c.vertex_count(), E = c.edge_count();
  std::size_t root = 0;
  for (std::size_t v = 1; v < V; ++v)
    if (c.vertex_ids()[v] < c.vertex_ids()[root]) root = v;
  std::vector<std::size_t> escan(E);
  std::iota(escan.begin(), escan.end(), std::size_t{0});
  std::sort(escan.begin(), escan.end(),
            [&](std::size_t x, std::size_t y) { return c.edges()[x].id < c.edges()[y].id; });

  std::vector<bool> visited(V, false), in_tree(E, false);
  // parent_edge[v]: tree edge used to reach v, with parent_fwd telling whether
  // it was traversed along its stored orientation.
  std::vector<std::optional<std::size_t>> parent_edge(V);
  std::vector<bool> parent_fwd(V, false);
  std::deque<std::size_t> queue{root};
  visited[root] = true;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t ei : escan) {
      const Edge& e = c.edges()[ei];
      if (e.a == v && !visited[e.b]) {
        visited[e.b] = true;
        in_tree[ei] = true;
        parent_edge[e.b] = ei;
        parent_fwd[e.b] = true;
        queue.push_back(e.b);
      } else if (e.b == v && !visited[e.a]) {
        visited[e.a] = true;
        in_tree[ei] = true;
        parent_edge[e.a] = ei;
        parent_fwd[e.a] = false;
        queue.push_back(e.a);
      }
    }
  }

  CycleBasis basis;
  for (std::size_t ei = 0; ei < E; ++ei)
    (in_tree[ei] ? basis.tree_edges : basis.nontree_edges).push_back(ei);

  // Signed tree path from v back to the root, accumulated into coefficients.
  auto walk_to_root = [&](std::size_t v, int sign, Vec& coeff) {
    while (parent_edge[v]) {
      std::size_t ei = *parent_edge[v];
      const Edge& e = c.edges()[ei];
      // Traversal child -> parent goes against the direction used to enter.
      coeff[ei] += parent_fwd[v] ? -sign : sign;
      v = parent_fwd[v] ? e.a : e.b;
    }
  };

  basis.cycles = IntMatrix(basis.nontree_edges.size(), E);
  for (std::size_t row = 0; row < basis.nontree_edges.size(); ++row) {
    std::size_t ei = basis.nontree_edges[row];
    const Edge& e = c.edges()[ei];
    Vec coeff(E, Int(0));
    coeff[ei] = 1;
    walk_to_root(e.b, 1, coeff);
    walk_to_root(e.a, -1, coeff);
    for (std::size_t j = 0; j < E; ++j) basis.cycles.at(row, j) = coeff[j];
  }
  return basis;
}

/// Contraction along a monoid homomorphism: edges whose length maps to zero
/// are collapsed, the rest keep their ids and carry the image lengths.
inline std::pair<TropCurve, CurveMap> contract(const TropCurve& c, const MonoidHom& hom,
                                               const FsMonoid& target) {
  if (!c.monoid().hom_maps_into(hom.matrix, target))
    throw hom_not_monoid_map("matrix does not map the source monoid into the target");

  const std::size_t V = c.vertex_count(), E = c.edge_count();
  std::vector<Vec> images(E);
  std::vector<bool> contracted(E);
  for (std::size_t i = 0; i < E; ++i) {
    images[i] = hom(c.edges()[i].length);
    contracted[i] = is_zero(images[i]);
  }

  // Union-find with minimum-index representatives, merged along contracted
  // edges.
  std::vector<std::size_t> rep(V);
  std::iota(rep.begin(), rep.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (rep[v] != v) v = rep[v] = rep[rep[v]];
    return v;
  };
  for (std::size_t i = 0; i < E; ++i) {
    if (!contracted[i]) continue;
    std::size_t x = find(c.edges()[i].a), y = find(c.edges()[i].b);
    if (x == y) continue;
    if (x < y) rep[y] = x;
    else rep[x] = y;
  }

  CurveMap map;
  map.kind = CurveMap::Kind::contraction;
  map.vertex_image.resize(V);
  std::vector<std::size_t> new_index(V, V);
  std::vector<std::string> new_vertices;
  for (std::size_t v = 0; v < V; ++v) {
    if (find(v) == v) {
      new_index[v] = new_vertices.size();
      new_vertices.push_back(c.vertex_ids()[v]);
    }
  }
  for (std::size_t v = 0; v < V; ++v) map.vertex_image[v] = new_index[find(v)];

  std::vector<EdgeSpec> new_edges;
  map.edge_image.resize(E);
  for (std::size_t i = 0; i < E; ++i) {
    if (contracted[i]) continue;
    const Edge& e = c.edges()[i];
    map.edge_image[i] = new_edges.size();
    new_edges.push_back(EdgeSpec{e.id, new_vertices[map.vertex_image[e.a]],
                                 new_vertices[map.vertex_image[e.b]], images[i]});
  }
  return {TropCurve(target, std::move(new_vertices), new_edges), std::move(map)};
}

/// Replaces one edge by a two-edge path through a fresh vertex. The pieces
/// must be nonzero monoid elements summing to the old length; the first piece
/// inherits the tail, the second the head.
inline std::pair<TropCurve, CurveMap> subdivide(const TropCurve& c, const std::string& edge_id,
                                                const Vec& l1, const Vec& l2) {
  auto idx = c.edge_index(edge_id);
  if (!idx) throw dangling_endpoint("no edge with id '" + edge_id + "'");
  const Edge& e = c.edges()[*idx];
  if (l1.size() != c.monoid().rank() || l2.size() != c.monoid().rank())
    throw bad_split("split lengths have wrong rank");
  if (add(l1, l2) != e.length) throw bad_split("split lengths do not sum to the edge length");
  if (is_zero(l1) || is_zero(l2)) throw bad_split("split lengths must be nonzero");
  if (!c.monoid().contains(l1) || !c.monoid().contains(l2))
    throw bad_split("split lengths must lie in the monoid");

  auto fresh = [&](std::string base, const auto& taken) {
    while (true) {
      bool clash = false;
      for (const auto& t : taken)
        if (t == base) {
          clash = true;
          break;
        }
      if (!clash) return base;
      base += "'";
    }
  };
  std::vector<std::string> vertices = c.vertex_ids();
  std::string mid = fresh(edge_id + ".v", vertices);
  vertices.push_back(mid);

  std::vector<std::string> edge_ids;
  for (const Edge& f : c.edges()) edge_ids.push_back(f.id);
  std::string id1 = fresh(edge_id + ".1", edge_ids);
  edge_ids.push_back(id1);
  std::string id2 = fresh(edge_id + ".2", edge_ids);

  CurveMap map;
  map.kind = CurveMap::Kind::subdivision;
  map.vertex_image.resize(c.vertex_count());
  std::iota(map.vertex_image.begin(), map.vertex_image.end(), std::size_t{0});
  map.edge_pieces.resize(c.edge_count());

  std::vector<EdgeSpec> new_edges;
  for (std::size_t i = 0; i < c.edge_count(); ++i) {
    const Edge& f = c.edges()[i];
    if (i == *idx) {
      map.edge_pieces[i] = {new_edges.size(), new_edges.size() + 1};
      new_edges.push_back(EdgeSpec{id1, c.vertex_ids()[f.a], mid, l1});
      new_edges.push_back(EdgeSpec{id2, mid, c.vertex_ids()[f.b], l2});
    } else {
      map.edge_pieces[i] = {new_edges.size()};
      new_edges.push_back(EdgeSpec{f.id, c.vertex_ids()[f.a], c.vertex_ids()[f.b], f.length});
    }
  }
  return {TropCurve(c.monoid(), std::move(vertices), new_edges), std::move(map)};
}

/// Bridges and maximal cycle-connected classes: two edges share a class iff
/// they lie on a common simple cycle. Classes are the non-bridge blocks of
/// the block (biconnected-component) decomposition; a loop is its own class,
/// and petals joined at a cut vertex stay separate. Bridges belong to none.
struct CycleComponents {
  std::vector<std::vector<std::size_t>> classes;  ///< edge indices, each sorted
  std::vector<std::size_t> bridges;               ///< edge indices, sorted
};

inline CycleComponents cycle_connected_components(const TropCurve& c) {
  const std::size_t V = c.vertex_count(), E = c.edge_count();
  CycleComponents out;

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(V);
  for (std::size_t i = 0; i < E; ++i) {
    const Edge& e = c.edges()[i];
    if (e.is_loop()) {
      out.classes.push_back({i});
      continue;
    }
    adj[e.a].push_back({e.b, i});
    adj[e.b].push_back({e.a, i});
  }

  std::vector<std::size_t> disc(V, 0), low(V, 0);
  std::vector<bool> visited(V, false), used(E, false);
  std::vector<std::size_t> edge_stack;
  std::size_t timer = 1;

  struct Frame {
    std::size_t v;
    std::size_t via_edge;  // tree edge used to enter, or E at a root
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  for (std::size_t root = 0; root < V; ++root) {
    if (visited[root]) continue;
    visited[root] = true;
    disc[root] = low[root] = timer++;
    stack.push_back({root, E, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[f.v].size()) {
        auto [w, ei] = adj[f.v][f.next++];
        if (ei == f.via_edge || used[ei]) continue;
        used[ei] = true;
        edge_stack.push_back(ei);
        if (visited[w]) {
          low[f.v] = std::min(low[f.v], disc[w]);
        } else {
          visited[w] = true;
          disc[w] = low[w] = timer++;
          stack.push_back({w, ei, 0});
        }
      } else {
        std::size_t v = f.v, via = f.via_edge;
        stack.pop_back();
        if (stack.empty()) continue;
        std::size_t p = stack.back().v;
        low[p] = std::min(low[p], low[v]);
        if (low[v] >= disc[p]) {
          // Pop one block: everything above and including the tree edge.
          std::vector<std::size_t> block;
          while (!edge_stack.empty()) {
            std::size_t top = edge_stack.back();
            edge_stack.pop_back();
            block.push_back(top);
            if (top == via) break;
          }
          std::sort(block.begin(), block.end());
          if (block.size() == 1) out.bridges.push_back(block[0]);
          else out.classes.push_back(std::move(block));
        }
      }
    }
  }
  std::sort(out.bridges.begin(), out.bridges.end());
  std::sort(out.classes.begin(), out.classes.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return out;
}

/// The induced subcurve on one cycle-connected class, over the same monoid.
inline TropCurve class_subcurve(const TropCurve& c, const std::vector<std::size_t>& class_edges) {
  std::vector<bool> keep_vertex(c.vertex_count(), false);
  for (std::size_t ei : class_edges) {
    keep_vertex[c.edges()[ei].a] = true;
    keep_vertex[c.edges()[ei].b] = true;
  }
  std::vector<std::string> vertices;
  for (std::size_t v = 0; v < c.vertex_count(); ++v)
    if (keep_vertex[v]) vertices.push_back(c.vertex_ids()[v]);
  std::vector<EdgeSpec> edges;
  for (std::size_t ei : class_edges) {
    const Edge& e = c.edges()[ei];
    edges.push_back(EdgeSpec{e.id, c.vertex_ids()[e.a], c.vertex_ids()[e.b], e.length});
  }
  return TropCurve(c.monoid(), std::move(vertices), edges);
}

/// Matrix of the induced map on H1 in the two fundamental bases: the row of a
/// source basis cycle holds the coordinates of its image. Unimodular for
/// subdivisions, surjective for contractions.
inline IntMatrix pushforward_cycles(const CurveMap& map, const CycleBasis& src,
                                    const CycleBasis& tgt) {
  const std::size_t E_src = src.cycles.cols();
  std::size_t E_tgt = tgt.cycles.cols();
  if (map.kind == CurveMap::Kind::contraction && map.edge_image.size() != E_src)
    throw basis_mismatch("source basis does not match the curve map");
  if (map.kind == CurveMap::Kind::subdivision && map.edge_pieces.size() != E_src)
    throw basis_mismatch("source basis does not match the curve map");

  IntMatrix out(src.rank(), tgt.rank());
  for (std::size_t row = 0; row < src.rank(); ++row) {
    Vec image(E_tgt, Int(0));
    for (std::size_t e = 0; e < E_src; ++e) {
      const Int& coef = src.cycles.at(row, e);
      if (coef == 0) continue;
      if (map.kind == CurveMap::Kind::contraction) {
        if (map.edge_image[e]) {
          if (*map.edge_image[e] >= E_tgt)
            throw basis_mismatch("target basis does not match the curve map");
          image[*map.edge_image[e]] += coef;
        }
      } else {
        for (std::size_t piece : map.edge_pieces[e]) {
          if (piece >= E_tgt) throw basis_mismatch("target basis does not match the curve map");
          image[piece] += coef;
        }
      }
    }
    Vec coords = tgt.coordinates(image);
    for (std::size_t j = 0; j < tgt.rank(); ++j) out.at(row, j) = coords[j];
  }
  return out;
}

}  // namespace tropjac
