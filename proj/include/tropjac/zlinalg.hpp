#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tropjac/errors.hpp"

namespace tropjac {

using Int = mpz_class;
using Vec = std::vector<Int>;

inline bool is_zero(const Vec& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

inline Int dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw InternalError("dot: length mismatch");
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec add(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw InternalError("add: length mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw InternalError("sub: length mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scale(const Int& c, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline Vec negate(const Vec& a) { return scale(-1, a); }

/// gcd of all entries, nonnegative; 0 for the zero vector.
inline Int content(const Vec& a) {
  Int g = 0;
  for (const Int& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

/// Divides out the content; the zero vector stays zero.
inline Vec primitive(const Vec& a) {
  Int g = content(a);
  if (g == 0 || g == 1) return a;
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] / g;
  return r;
}

inline bool lex_less(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

inline std::string to_string(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i].get_str();
  }
  os << ")";
  return os.str();
}

/// Dense matrix of arbitrary-precision integers, row-major. Rows or columns
/// may be zero; all algorithms below accept empty shapes.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, Int(0)) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(std::size_t cols, const std::vector<Vec>& rows) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw InternalError("from_rows: ragged input");
      for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Int& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  Vec row(std::size_t i) const {
    Vec r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
    return r;
  }

  Vec col(std::size_t j) const {
    Vec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
    return c;
  }

  std::vector<Vec> row_list() const {
    std::vector<Vec> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  bool is_zero() const {
    for (const Int& x : entries_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  /// v * M for a row vector v of length rows().
  Vec apply_left(const Vec& v) const {
    if (v.size() != rows_) throw InternalError("apply_left: length mismatch");
    Vec r(cols_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (v[i] == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) r[j] += v[i] * at(i, j);
    }
    return r;
  }

  /// M * v for a column vector v of length cols().
  Vec apply(const Vec& v) const {
    if (v.size() != cols_) throw InternalError("apply: length mismatch");
    Vec r(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      Int s = 0;
      for (std::size_t j = 0; j < cols_; ++j) s += at(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) os << ",";
        os << at(i, j).get_str();
      }
    }
    os << "]";
    return os.str();
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> entries_;
};

inline IntMatrix mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InternalError("mul: shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a.at(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return c;
}

inline std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  return os << m.to_string();
}

struct HnfResult {
  IntMatrix h;  ///< row Hermite normal form, zero rows last
  IntMatrix u;  ///< unimodular, u * m = h
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}

inline void negate_row(IntMatrix& m, std::size_t i) {
  for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = -m.at(i, j);
}

// row_dst -= q * row_src
inline void submul_row(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m.at(dst, j) -= q * m.at(src, j);
}

inline Int floordiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

}  // namespace detail

/// Row Hermite normal form. Convention fixed project-wide: pivot columns
/// strictly increase with the row index, pivots are positive, entries above a
/// pivot are reduced into [0, pivot), entries below are zero, zero rows sort
/// last. The form is the unique such representative of the row span, so
/// lattice equality is representational equality.
inline HnfResult hnf(const IntMatrix& m) {
  IntMatrix h = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  std::size_t r = 0;
  for (std::size_t col = 0; col < h.cols() && r < h.rows(); ++col) {
    // Euclidean elimination below row r in this column.
    while (true) {
      std::size_t best = h.rows();
      for (std::size_t i = r; i < h.rows(); ++i) {
        if (h.at(i, col) == 0) continue;
        if (best == h.rows() || mpz_cmpabs(h.at(i, col).get_mpz_t(), h.at(best, col).get_mpz_t()) < 0)
          best = i;
      }
      if (best == h.rows()) break;  // column clear below r
      detail::swap_rows(h, r, best);
      detail::swap_rows(u, r, best);
      bool again = false;
      for (std::size_t i = r + 1; i < h.rows(); ++i) {
        if (h.at(i, col) == 0) continue;
        Int q = detail::floordiv(h.at(i, col), h.at(r, col));
        detail::submul_row(h, i, r, q);
        detail::submul_row(u, i, r, q);
        if (h.at(i, col) != 0) again = true;
      }
      if (!again) break;
    }
    if (h.at(r, col) == 0) continue;  // no pivot in this column
    if (h.at(r, col) < 0) {
      detail::negate_row(h, r);
      detail::negate_row(u, r);
    }
    for (std::size_t i = 0; i < r; ++i) {
      Int q = detail::floordiv(h.at(i, col), h.at(r, col));
      detail::submul_row(h, i, r, q);
      detail::submul_row(u, i, r, q);
    }
    ++r;
  }
  return {std::move(h), std::move(u)};
}

struct SnfResult {
  IntMatrix d;  ///< diagonal, nonnegative, d_i | d_{i+1}, zeros last
  IntMatrix u;  ///< unimodular, u * m * v = d
  IntMatrix v;  ///< unimodular
};

/// Smith normal form via alternating row/column reduction.
inline SnfResult snf(const IntMatrix& m) {
  IntMatrix d = m;
  IntMatrix u = IntMatrix::identity(m.rows());
  IntMatrix v = IntMatrix::identity(m.cols());

  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < d.rows(); ++i) std::swap(d.at(i, a), d.at(i, b));
    for (std::size_t i = 0; i < v.rows(); ++i) std::swap(v.at(i, a), v.at(i, b));
  };
  auto submul_col = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < d.rows(); ++i) d.at(i, dst) -= q * d.at(i, src);
    for (std::size_t i = 0; i < v.rows(); ++i) v.at(i, dst) -= q * v.at(i, src);
  };

  const std::size_t n = std::min(d.rows(), d.cols());
  for (std::size_t t = 0; t < n; ++t) {
    // Find the entry of smallest absolute value in the trailing block.
    auto find_pivot = [&]() -> std::optional<std::pair<std::size_t, std::size_t>> {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < d.rows(); ++i)
        for (std::size_t j = t; j < d.cols(); ++j) {
          if (d.at(i, j) == 0) continue;
          if (!best ||
              mpz_cmpabs(d.at(i, j).get_mpz_t(), d.at(best->first, best->second).get_mpz_t()) < 0)
            best = {{i, j}};
        }
      return best;
    };

    auto p = find_pivot();
    if (!p) break;  // trailing block zero
    while (true) {
      p = find_pivot();
      detail::swap_rows(d, t, p->first);
      detail::swap_rows(u, t, p->first);
      swap_cols(t, p->second);
      // Clear column t below the pivot.
      bool dirty = false;
      for (std::size_t i = t + 1; i < d.rows(); ++i) {
        if (d.at(i, t) == 0) continue;
        Int q = detail::floordiv(d.at(i, t), d.at(t, t));
        detail::submul_row(d, i, t, q);
        detail::submul_row(u, i, t, q);
        if (d.at(i, t) != 0) dirty = true;
      }
      if (dirty) continue;
      // Clear row t to the right of the pivot.
      for (std::size_t j = t + 1; j < d.cols(); ++j) {
        if (d.at(t, j) == 0) continue;
        Int q = detail::floordiv(d.at(t, j), d.at(t, t));
        submul_col(j, t, q);
        if (d.at(t, j) != 0) dirty = true;
      }
      if (dirty) continue;
      // Pivot divides the rest of the block, or fold a bad row in and retry.
      bool divides = true;
      for (std::size_t i = t + 1; i < d.rows() && divides; ++i)
        for (std::size_t j = t + 1; j < d.cols() && divides; ++j) {
          if (d.at(i, j) % d.at(t, t) != 0) {
            detail::submul_row(d, t, i, Int(-1));  // add row i to row t
            detail::submul_row(u, t, i, Int(-1));
            divides = false;
          }
        }
      if (divides) break;
    }
    if (d.at(t, t) < 0) {
      detail::negate_row(d, t);
      detail::negate_row(u, t);
    }
  }
  return {std::move(d), std::move(u), std::move(v)};
}

/// Inverse of a unimodular matrix. (The HNF of a unimodular matrix is the
/// identity, so the transform is the inverse.)
inline IntMatrix inverse_unimodular(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw InternalError("inverse_unimodular: not square");
  HnfResult r = hnf(m);
  if (r.h != IntMatrix::identity(m.rows()))
    throw InternalError("inverse_unimodular: matrix is not unimodular");
  return r.u;
}

/// Solves x * a = b over the integers; nullopt when no integral solution
/// exists. Forward substitution along the pivot columns of the HNF.
inline std::optional<Vec> solve_left(const IntMatrix& a, const Vec& b) {
  if (b.size() != a.cols()) throw InternalError("solve_left: length mismatch");
  HnfResult r = hnf(a);
  Vec work = b;
  Vec y(a.rows(), Int(0));
  for (std::size_t i = 0; i < r.h.rows(); ++i) {
    std::size_t piv = r.h.cols();
    for (std::size_t j = 0; j < r.h.cols(); ++j)
      if (r.h.at(i, j) != 0) {
        piv = j;
        break;
      }
    if (piv == r.h.cols()) break;  // zero rows from here on
    Int q, rem;
    mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), work[piv].get_mpz_t(), r.h.at(i, piv).get_mpz_t());
    if (rem != 0) return std::nullopt;
    y[i] = q;
    if (q != 0)
      for (std::size_t j = 0; j < r.h.cols(); ++j) work[j] -= q * r.h.at(i, j);
  }
  if (!is_zero(work)) return std::nullopt;
  return r.u.apply_left(y);
}

/// A sublattice of Z^ambient, stored as the unique HNF basis of its row span
/// with zero rows dropped. Representational equality is lattice equality.
class Sublattice {
 public:
  /// The zero sublattice of Z^ambient.
  explicit Sublattice(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

  static Sublattice zero(std::size_t ambient) { return Sublattice(ambient); }

  static Sublattice full(std::size_t ambient) {
    Sublattice l(ambient);
    l.basis_ = IntMatrix::identity(ambient);
    return l;
  }

  /// Span of the rows of `gens` (need not be independent or reduced).
  static Sublattice from_generators(std::size_t ambient, const IntMatrix& gens) {
    if (gens.cols() != ambient) throw InternalError("Sublattice: ambient mismatch");
    HnfResult r = hnf(gens);
    std::size_t k = 0;
    while (k < r.h.rows() && !is_zero(r.h.row(k))) ++k;
    Sublattice l(ambient);
    IntMatrix b(k, ambient);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < ambient; ++j) b.at(i, j) = r.h.at(i, j);
    l.basis_ = std::move(b);
    return l;
  }

  static Sublattice from_rows(std::size_t ambient, const std::vector<Vec>& rows) {
    return from_generators(ambient, IntMatrix::from_rows(ambient, rows));
  }

  std::size_t ambient_rank() const { return ambient_; }
  std::size_t rank() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }

  bool operator==(const Sublattice& o) const {
    return ambient_ == o.ambient_ && basis_ == o.basis_;
  }
  bool operator!=(const Sublattice& o) const { return !(*this == o); }

  /// Membership by forward substitution along pivot columns.
  bool contains(const Vec& v) const {
    if (v.size() != ambient_) throw InternalError("Sublattice::contains: length mismatch");
    Vec work = v;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      std::size_t piv = pivot_col(i);
      Int q, rem;
      mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), work[piv].get_mpz_t(),
                  basis_.at(i, piv).get_mpz_t());
      if (rem != 0) return false;
      if (q != 0)
        for (std::size_t j = 0; j < ambient_; ++j) work[j] -= q * basis_.at(i, j);
    }
    return is_zero(work);
  }

  bool contains(const Sublattice& o) const {
    for (std::size_t i = 0; i < o.basis_.rows(); ++i)
      if (!contains(o.basis_.row(i))) return false;
    return true;
  }

  /// Coordinates of v in the HNF basis; nullopt when v is not in the lattice.
  std::optional<Vec> coordinates(const Vec& v) const {
    if (v.size() != ambient_) throw InternalError("Sublattice::coordinates: length mismatch");
    Vec work = v;
    Vec coords(basis_.rows(), Int(0));
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      std::size_t piv = pivot_col(i);
      Int q, rem;
      mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), work[piv].get_mpz_t(),
                  basis_.at(i, piv).get_mpz_t());
      if (rem != 0) return std::nullopt;
      coords[i] = q;
      if (q != 0)
        for (std::size_t j = 0; j < ambient_; ++j) work[j] -= q * basis_.at(i, j);
    }
    if (!is_zero(work)) return std::nullopt;
    return coords;
  }

  /// Canonical coset representative of v modulo this lattice: every pivot
  /// coordinate is reduced into [0, pivot), in ascending pivot order. Two
  /// vectors reduce to the same representative iff they lie in the same
  /// coset.
  Vec reduce(const Vec& v) const {
    if (v.size() != ambient_) throw InternalError("Sublattice::reduce: length mismatch");
    Vec work = v;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      std::size_t piv = pivot_col(i);
      Int q = detail::floordiv(work[piv], basis_.at(i, piv));
      if (q != 0)
        for (std::size_t j = 0; j < ambient_; ++j) work[j] -= q * basis_.at(i, j);
    }
    return work;
  }

 private:
  std::size_t pivot_col(std::size_t i) const {
    for (std::size_t j = 0; j < ambient_; ++j)
      if (basis_.at(i, j) != 0) return j;
    throw InternalError("Sublattice: zero basis row");
  }

  std::size_t ambient_;
  IntMatrix basis_;
};

/// Integer kernel {x : m x = 0} of m as a map Z^cols -> Z^rows. Always
/// saturated.
inline Sublattice kernel(const IntMatrix& m) {
  // Rows of u opposite the zero rows of hnf(m^T) form a basis of the kernel.
  HnfResult r = hnf(m.transpose());
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < r.h.rows(); ++i)
    if (is_zero(r.h.row(i))) rows.push_back(r.u.row(i));
  return Sublattice::from_rows(m.cols(), rows);
}

/// Smallest saturated sublattice containing l: x is in the result iff some
/// positive multiple of x lies in span(l). Computed as the integer points of
/// the rational row span, via a double kernel.
inline Sublattice saturate(const Sublattice& l) {
  Sublattice n = kernel(l.basis());
  return kernel(n.basis());
}

/// Isomorphism class of a finitely generated abelian group: free rank plus
/// the invariant factor chain d_1 | d_2 | ... with every d_i >= 2.
struct FgAbGroup {
  std::size_t rank = 0;
  std::vector<Int> invariant_factors;

  bool operator==(const FgAbGroup& o) const {
    return rank == o.rank && invariant_factors == o.invariant_factors;
  }
  bool operator!=(const FgAbGroup& o) const { return !(*this == o); }

  bool is_trivial() const { return rank == 0 && invariant_factors.empty(); }
  bool is_finite() const { return rank == 0; }

  /// Order of the torsion part.
  Int torsion_order() const {
    Int n = 1;
    for (const Int& d : invariant_factors) n *= d;
    return n;
  }

  std::string to_string() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (rank > 0) {
      os << "Z";
      if (rank > 1) os << "^" << rank;
      first = false;
    }
    for (const Int& d : invariant_factors) {
      if (!first) os << " + ";
      os << "Z/" << d.get_str();
      first = false;
    }
    return os.str();
  }
};

/// Isomorphism class of Z^ambient_rank / span(relations).
inline FgAbGroup quotient(std::size_t ambient_rank, const Sublattice& relations) {
  if (relations.ambient_rank() != ambient_rank)
    throw InternalError("quotient: ambient rank mismatch");
  SnfResult s = snf(relations.basis());
  FgAbGroup g;
  std::size_t nonzero = 0;
  const std::size_t n = std::min(s.d.rows(), s.d.cols());
  for (std::size_t i = 0; i < n; ++i) {
    if (s.d.at(i, i) == 0) continue;
    ++nonzero;
    if (s.d.at(i, i) >= 2) g.invariant_factors.push_back(s.d.at(i, i));
  }
  g.rank = ambient_rank - nonzero;
  return g;
}

/// Direct sum of isomorphism classes (re-normalizes the factor chain).
inline FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
  std::vector<Int> all = a.invariant_factors;
  all.insert(all.end(), b.invariant_factors.begin(), b.invariant_factors.end());
  IntMatrix diag(all.size(), all.size());
  for (std::size_t i = 0; i < all.size(); ++i) diag.at(i, i) = all[i];
  FgAbGroup g = quotient(all.size(), Sublattice::from_generators(all.size(), diag));
  g.rank += a.rank + b.rank;
  return g;
}

/// {x : m x lies in span(target)} for m : Z^cols -> Z^rows. Saturated iff the
/// target is saturated.
inline Sublattice preimage_lattice(const IntMatrix& m, const Sublattice& target) {
  if (target.ambient_rank() != m.rows())
    throw InternalError("preimage_lattice: target ambient mismatch");
  const std::size_t c = m.cols(), k = target.rank();
  // Kernel of [m | -T^t] projected onto the first c coordinates.
  IntMatrix block(m.rows(), c + k);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < c; ++j) block.at(i, j) = m.at(i, j);
    for (std::size_t j = 0; j < k; ++j) block.at(i, c + j) = -target.basis().at(j, i);
  }
  Sublattice ker = kernel(block);
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < ker.rank(); ++i) {
    Vec full = ker.basis().row(i);
    rows.emplace_back(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(c));
  }
  return Sublattice::from_rows(c, rows);
}

/// span(a) meet span(b), in HNF.
inline Sublattice lattice_intersection(const Sublattice& a, const Sublattice& b) {
  if (a.ambient_rank() != b.ambient_rank())
    throw InternalError("lattice_intersection: ambient rank mismatch");
  const std::size_t n = a.ambient_rank(), ka = a.rank(), kb = b.rank();
  // Solutions (u, v) of u A = v B; the intersection is the image of the u
  // parts under A.
  IntMatrix block(n, ka + kb);
  for (std::size_t j = 0; j < ka; ++j)
    for (std::size_t i = 0; i < n; ++i) block.at(i, j) = a.basis().at(j, i);
  for (std::size_t j = 0; j < kb; ++j)
    for (std::size_t i = 0; i < n; ++i) block.at(i, ka + j) = -b.basis().at(j, i);
  Sublattice ker = kernel(block);
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < ker.rank(); ++i) {
    Vec uv = ker.basis().row(i);
    Vec u(uv.begin(), uv.begin() + static_cast<std::ptrdiff_t>(ka));
    rows.push_back(a.basis().apply_left(u));
  }
  return Sublattice::from_rows(n, rows);
}

}  // namespace tropjac
