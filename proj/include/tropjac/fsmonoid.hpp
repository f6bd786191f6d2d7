#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "tropjac/errors.hpp"
#include "tropjac/zlinalg.hpp"

namespace tropjac {

/// A monoid homomorphism M -> N between fs monoids, as the matrix of the
/// induced map on groupifications. Applied to column vectors: x |-> matrix x.
struct MonoidHom {
  IntMatrix matrix;  ///< target rank x source rank

  Vec operator()(const Vec& x) const { return matrix.apply(x); }

  static MonoidHom identity(std::size_t rank) { return {IntMatrix::identity(rank)}; }
};

inline MonoidHom compose(const MonoidHom& second, const MonoidHom& first) {
  return {mul(second.matrix, first.matrix)};
}

/// For two surjections with nested kernels (ker proj_sub inside
/// ker proj_super), the unique map r with r * proj_sub = proj_super.
inline MonoidHom relative_projection(const MonoidHom& proj_sub, const MonoidHom& proj_super) {
  if (proj_sub.matrix.cols() != proj_super.matrix.cols())
    throw InternalError("relative_projection: source ranks differ");
  IntMatrix r(proj_super.matrix.rows(), proj_sub.matrix.rows());
  for (std::size_t i = 0; i < r.rows(); ++i) {
    auto x = solve_left(proj_sub.matrix, proj_super.matrix.row(i));
    if (!x) throw InternalError("relative_projection: kernels are not nested");
    for (std::size_t k = 0; k < r.cols(); ++k) r.at(i, k) = (*x)[k];
  }
  return {std::move(r)};
}

/// A face of an fs monoid, kept inside the parent FsMonoid and addressed by
/// index. Stores the extreme rays spanning it, the parent generators lying in
/// it, the facet normals vanishing on it, and the saturated span F^gp.
struct Face {
  std::size_t index = 0;
  std::vector<std::size_t> ray_indices;        ///< sorted, into parent extreme_rays()
  std::vector<std::size_t> generator_indices;  ///< sorted, into parent generators()
  std::vector<std::size_t> active_facets;      ///< sorted, into parent facet_normals()
  Sublattice span;                             ///< saturated span of the face

  Face() : span(0) {}

  bool is_zero_face() const { return span.rank() == 0; }
};

/// A sharp fine saturated monoid M, realized as a strongly convex rational
/// cone sigma in Z^rank with M = sigma meet Z^rank. M^gp = Z^rank; when the
/// input generators span a proper subspace the constructor re-embeds so this
/// holds. The face lattice, extreme rays and facet normals are computed at
/// construction and cached; values are immutable afterwards.
class FsMonoid {
 public:
  FsMonoid(std::size_t rank, std::vector<Vec> generators) : rank_(rank), embedding_(0, 0) {
    for (const Vec& g : generators) {
      if (g.size() != rank)
        throw dimension_mismatch("generator has length " + std::to_string(g.size()) +
                                 ", expected " + std::to_string(rank));
      if (is_zero(g)) throw zero_generator("generators must be nonzero");
    }
    // Re-embed into the saturated span so that rank = rank of M^gp.
    Sublattice span = saturate(Sublattice::from_rows(rank, generators));
    if (span.rank() < rank) {
      std::vector<Vec> reembedded;
      reembedded.reserve(generators.size());
      for (const Vec& g : generators) {
        auto coords = span.coordinates(g);
        if (!coords) throw InternalError("FsMonoid: generator escapes its saturated span");
        reembedded.push_back(*coords);
      }
      rank_ = span.rank();
      generators_ = std::move(reembedded);
      embedding_ = span.basis();
    } else {
      generators_ = std::move(generators);
      embedding_ = IntMatrix::identity(rank);
    }
    build();
  }

  /// The monoid {0} of rank 0.
  static FsMonoid trivial() { return FsMonoid(0, {}); }

  /// N^n, the free monoid on the coordinate axes.
  static FsMonoid free(std::size_t n) {
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < n; ++i) {
      Vec e(n, Int(0));
      e[i] = 1;
      gens.push_back(e);
    }
    return FsMonoid(n, gens);
  }

  std::size_t rank() const { return rank_; }
  const std::vector<Vec>& generators() const { return generators_; }
  const std::vector<Vec>& facet_normals() const { return facet_normals_; }
  const std::vector<Vec>& extreme_rays() const { return extreme_rays_; }
  const std::vector<Face>& faces() const { return faces_; }

  /// Basis of the original-coordinate span when the constructor re-embedded;
  /// identity otherwise. Rows are monoid-coordinate basis vectors expressed
  /// in the input coordinates.
  const IntMatrix& embedding() const { return embedding_; }
  bool was_reembedded() const {
    return embedding_.rows() != embedding_.cols();
  }

  /// Cone membership of an integer vector (saturation makes integrality
  /// automatic).
  bool contains(const Vec& a) const {
    if (a.size() != rank_)
      throw dimension_mismatch("vector has length " + std::to_string(a.size()) + ", expected " +
                               std::to_string(rank_));
    for (const Vec& n : facet_normals_)
      if (dot(n, a) < 0) return false;
    return true;
  }

  /// The partial order induced by M: a <= b iff b - a lies in M.
  bool leq(const Vec& a, const Vec& b) const { return contains(sub(b, a)); }

  /// The unique face containing b in its relative interior.
  const Face& face_of(const Vec& b) const {
    if (!contains(b)) throw not_in_monoid("face_of: vector is not in the monoid");
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < facet_normals_.size(); ++i)
      if (dot(facet_normals_[i], b) == 0) active.push_back(i);
    auto it = face_by_active_.find(active);
    if (it == face_by_active_.end()) throw InternalError("face_of: face lattice lookup failed");
    return faces_[it->second];
  }

  /// The subgroup of M^gp of elements a with nb <= a <= mb for some integers
  /// n, m: equals the span of the face containing b.
  Sublattice bounded_by_subgroup(const Vec& b) const { return face_of(b).span; }

  /// Projection M -> M/F killing exactly the face F, together with the
  /// quotient monoid. The complement is fixed by the Smith normal form of the
  /// face span, so the output is deterministic.
  std::pair<MonoidHom, FsMonoid> quotient_by_face(const Face& f) const {
    validate_face(f);
    const std::size_t k = f.span.rank();
    if (k == 0) return {MonoidHom::identity(rank_), *this};
    SnfResult s = snf(f.span.basis());
    for (std::size_t i = 0; i < k; ++i)
      if (s.d.at(i, i) != 1)
        throw InternalError("quotient_by_face: face span is not saturated");
    // x maps to the last rank-k coordinates of x*V; the kernel is exactly the
    // span of the face.
    IntMatrix proj(rank_ - k, rank_);
    for (std::size_t a = 0; a < rank_ - k; ++a)
      for (std::size_t i = 0; i < rank_; ++i) proj.at(a, i) = s.v.at(i, k + a);
    std::vector<Vec> qgens;
    for (const Vec& g : generators_) {
      Vec img = proj.apply(g);
      if (!is_zero(img)) qgens.push_back(img);
    }
    FsMonoid q(rank_ - k, qgens);
    if (q.rank() != rank_ - k) throw InternalError("quotient_by_face: quotient lost rank");
    return {MonoidHom{std::move(proj)}, std::move(q)};
  }

  std::pair<MonoidHom, FsMonoid> quotient_by_face(std::size_t face_index) const {
    return quotient_by_face(faces_.at(face_index));
  }

  /// A functional M -> N strictly positive on M minus 0: the sum of the facet
  /// normals (an integral interior point of the dual cone).
  MonoidHom positive_functional() const {
    IntMatrix mat(1, rank_);
    for (const Vec& n : facet_normals_)
      for (std::size_t j = 0; j < rank_; ++j) mat.at(0, j) += n[j];
    return {std::move(mat)};
  }

  /// Checks that a matrix maps every generator of this monoid into the
  /// target cone.
  bool hom_maps_into(const IntMatrix& matrix, const FsMonoid& target) const {
    if (matrix.cols() != rank_ || matrix.rows() != target.rank()) return false;
    for (const Vec& g : generators_)
      if (!target.contains(matrix.apply(g))) return false;
    return true;
  }

  /// If v lies on an extreme ray, its index and the (positive) integer
  /// multiplier with v = c * ray; nullopt otherwise (including v = 0).
  std::optional<std::pair<std::size_t, Int>> ray_through(const Vec& v) const {
    if (is_zero(v)) return std::nullopt;
    const Face& f = face_of(v);
    if (f.ray_indices.size() != 1 || f.span.rank() != 1) return std::nullopt;
    std::size_t ri = f.ray_indices[0];
    const Vec& ray = extreme_rays_[ri];
    for (std::size_t j = 0; j < rank_; ++j) {
      if (ray[j] == 0) continue;
      Int c, rem;
      mpz_tdiv_qr(c.get_mpz_t(), rem.get_mpz_t(), v[j].get_mpz_t(), ray[j].get_mpz_t());
      if (rem != 0) break;
      if (v == scale(c, ray)) return {{ri, c}};
      break;
    }
    throw InternalError("ray_through: vector on a ray is not a multiple of it");
  }

  /// Face index with exactly the given set of extreme rays, if any.
  std::optional<std::size_t> face_with_rays(std::vector<std::size_t> rays) const {
    std::sort(rays.begin(), rays.end());
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    for (const Face& f : faces_)
      if (f.ray_indices == rays) return f.index;
    return std::nullopt;
  }

  /// Equality as cones (rank and extreme ray sets coincide).
  bool operator==(const FsMonoid& o) const {
    return rank_ == o.rank_ && extreme_rays_ == o.extreme_rays_;
  }
  bool operator!=(const FsMonoid& o) const { return !(*this == o); }

 private:
  void validate_face(const Face& f) const {
    if (f.index >= faces_.size()) throw not_a_face("face index out of range");
    const Face& own = faces_[f.index];
    if (own.ray_indices != f.ray_indices || own.span != f.span)
      throw not_a_face("face does not belong to this monoid");
  }

  void build() {
    compute_dual_rays();
    compute_extreme_rays();
    compute_faces();
  }

  // Extreme rays of the dual cone {f : f.g >= 0 for all generators g}: every
  // candidate comes from rank-1 kernels of (rank-1)-subsets of generators.
  // Their span has full rank iff the cone is sharp, and for a sharp full-
  // dimensional cone they are exactly the facet normals.
  void compute_dual_rays() {
    std::set<Vec, bool (*)(const Vec&, const Vec&)> found(&lex_less);
    if (rank_ >= 1) {
      std::vector<std::size_t> subset;
      enumerate_subsets(0, rank_ - 1, subset, found);
    }
    facet_normals_.assign(found.begin(), found.end());
    IntMatrix d(facet_normals_.size(), rank_);
    for (std::size_t i = 0; i < facet_normals_.size(); ++i)
      for (std::size_t j = 0; j < rank_; ++j) d.at(i, j) = facet_normals_[i][j];
    if (Sublattice::from_generators(rank_, d).rank() != rank_)
      throw not_sharp("cone contains a line");
  }

  void enumerate_subsets(std::size_t start, std::size_t want, std::vector<std::size_t>& subset,
                         std::set<Vec, bool (*)(const Vec&, const Vec&)>& found) {
    if (subset.size() == want) {
      consider_normal_candidate(subset, found);
      return;
    }
    for (std::size_t i = start; i + (want - subset.size()) <= generators_.size(); ++i) {
      subset.push_back(i);
      enumerate_subsets(i + 1, want, subset, found);
      subset.pop_back();
    }
  }

  void consider_normal_candidate(const std::vector<std::size_t>& subset,
                                 std::set<Vec, bool (*)(const Vec&, const Vec&)>& found) {
    IntMatrix m(subset.size(), rank_);
    for (std::size_t i = 0; i < subset.size(); ++i)
      for (std::size_t j = 0; j < rank_; ++j) m.at(i, j) = generators_[subset[i]][j];
    Sublattice ker = kernel(m);
    if (ker.rank() != 1) return;
    Vec n = primitive(ker.basis().row(0));
    bool nonneg = true, nonpos = true;
    for (const Vec& g : generators_) {
      Int p = dot(n, g);
      if (p > 0) nonpos = false;
      if (p < 0) nonneg = false;
    }
    if (nonneg) found.insert(n);
    if (nonpos) found.insert(negate(n));
  }

  void compute_extreme_rays() {
    std::set<Vec, bool (*)(const Vec&, const Vec&)> rays(&lex_less);
    for (const Vec& g : generators_) {
      std::vector<Vec> active;
      for (const Vec& n : facet_normals_)
        if (dot(n, g) == 0) active.push_back(n);
      if (Sublattice::from_rows(rank_, active).rank() + 1 == rank_) rays.insert(primitive(g));
    }
    extreme_rays_.assign(rays.begin(), rays.end());
  }

  std::vector<std::size_t> canonical_active(const std::vector<std::size_t>& active) const {
    // Generators vanishing on the given normals, then all normals vanishing
    // on those generators. This closure is the canonical key of the face.
    std::vector<std::size_t> gens;
    for (std::size_t gi = 0; gi < generators_.size(); ++gi) {
      bool on = true;
      for (std::size_t ni : active)
        if (dot(facet_normals_[ni], generators_[gi]) != 0) {
          on = false;
          break;
        }
      if (on) gens.push_back(gi);
    }
    std::vector<std::size_t> canon;
    for (std::size_t ni = 0; ni < facet_normals_.size(); ++ni) {
      bool vanishes = true;
      for (std::size_t gi : gens)
        if (dot(facet_normals_[ni], generators_[gi]) != 0) {
          vanishes = false;
          break;
        }
      if (vanishes) canon.push_back(ni);
    }
    return canon;
  }

  void compute_faces() {
    std::set<std::vector<std::size_t>> seen;
    std::vector<std::vector<std::size_t>> queue;
    std::vector<std::size_t> top = canonical_active({});
    seen.insert(top);
    queue.push_back(top);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      std::vector<std::size_t> cur = queue[q];
      for (std::size_t ni = 0; ni < facet_normals_.size(); ++ni) {
        if (std::binary_search(cur.begin(), cur.end(), ni)) continue;
        std::vector<std::size_t> ext = cur;
        ext.push_back(ni);
        std::sort(ext.begin(), ext.end());
        std::vector<std::size_t> canon = canonical_active(ext);
        if (seen.insert(canon).second) queue.push_back(canon);
      }
    }
    faces_.clear();
    for (const std::vector<std::size_t>& active : seen) {
      Face f;
      f.active_facets = active;
      for (std::size_t gi = 0; gi < generators_.size(); ++gi) {
        bool on = true;
        for (std::size_t ni : active)
          if (dot(facet_normals_[ni], generators_[gi]) != 0) {
            on = false;
            break;
          }
        if (on) f.generator_indices.push_back(gi);
      }
      for (std::size_t ri = 0; ri < extreme_rays_.size(); ++ri) {
        bool on = true;
        for (std::size_t ni : active)
          if (dot(facet_normals_[ni], extreme_rays_[ri]) != 0) {
            on = false;
            break;
          }
        if (on) f.ray_indices.push_back(ri);
      }
      std::vector<Vec> span_gens;
      for (std::size_t gi : f.generator_indices) span_gens.push_back(generators_[gi]);
      f.span = saturate(Sublattice::from_rows(rank_, span_gens));
      faces_.push_back(std::move(f));
    }
    std::sort(faces_.begin(), faces_.end(), [](const Face& a, const Face& b) {
      if (a.span.rank() != b.span.rank()) return a.span.rank() < b.span.rank();
      return a.ray_indices < b.ray_indices;
    });
    face_by_active_.clear();
    for (std::size_t i = 0; i < faces_.size(); ++i) {
      faces_[i].index = i;
      face_by_active_[faces_[i].active_facets] = i;
    }
  }

  std::size_t rank_;
  std::vector<Vec> generators_;
  IntMatrix embedding_;
  std::vector<Vec> facet_normals_;
  std::vector<Vec> extreme_rays_;
  std::vector<Face> faces_;
  std::map<std::vector<std::size_t>, std::size_t> face_by_active_;
};

}  // namespace tropjac
