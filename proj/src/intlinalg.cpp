#include "symring/intlinalg.hpp"

#include <algorithm>
#include <functional>

namespace symring {

Int xgcd(const Int& a, const Int& b, Int& s, Int& t) {
  Int old_r = a, r = b;
  Int old_s = 1, s_ = 0;
  Int old_t = 0, t_ = 1;
  while (r != 0) {
    Int q = old_r / r;  // truncated division is fine for the Euclid loop
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s_;
    old_s = s_;
    s_ = tmp;
    tmp = old_t - q * t_;
    old_t = t_;
    t_ = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if (q * b != a && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

/* Forward elimination + reduction above pivots, applied to h with the same
   row operations mirrored on u.  Columns are cleared by moving-minimum
   Euclidean steps: quotients stay small, so transform entries grow
   additively instead of compounding through an xgcd cascade. */
void hnf_in_place(IntMat& h, IntMat* u, std::vector<int>& pivots) {
  const int m = static_cast<int>(h.rows());
  const int n = static_cast<int>(h.cols());
  pivots.clear();
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    while (true) {
      int best = -1;
      Int bestmag = 0;
      for (int i = r; i < m; ++i) {
        if (h(i, c) == 0) continue;
        Int mag = h(i, c) < 0 ? Int(-h(i, c)) : h(i, c);
        if (best < 0 || mag < bestmag) {
          best = i;
          bestmag = mag;
        }
      }
      if (best < 0) break;
      if (best != r) {
        h.row(best).swap(h.row(r));
        if (u) u->row(best).swap(u->row(r));
      }
      if (h(r, c) < 0) {
        h.row(r) = -h.row(r);
        if (u) u->row(r) = -u->row(r);
      }
      const Int p = h(r, c);
      bool clear = true;
      for (int i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        /* Balanced quotient: leaves |remainder| <= p/2. */
        Int q = floor_div(2 * h(i, c) + p, 2 * p);
        if (q != 0) {
          h.row(i) -= q * h.row(r);
          if (u) u->row(i) -= q * u->row(r);
        }
        if (h(i, c) != 0) clear = false;
      }
      if (clear) {
        pivots.push_back(c);
        ++r;
        break;
      }
    }
  }
  for (int k = 0; k < static_cast<int>(pivots.size()); ++k) {
    int c = pivots[static_cast<std::size_t>(k)];
    for (int i = 0; i < k; ++i) {
      if (h(i, c) == 0) continue;
      Int q = floor_div(h(i, c), h(k, c));
      if (q == 0) continue;
      h.row(i) -= q * h.row(k);
      if (u) u->row(i) -= q * u->row(k);
    }
  }
}

}  // namespace

IntMat hnf(IntMat a) {
  std::vector<int> pivots;
  hnf_in_place(a, nullptr, pivots);
  return a.topRows(static_cast<int>(pivots.size()));
}

HnfTransform hnf_with_transform(IntMat a) {
  HnfTransform out;
  const int m = static_cast<int>(a.rows());
  out.u = IntMat::Identity(m, m);
  hnf_in_place(a, &out.u, out.pivots);
  out.h = std::move(a);
  out.rank = static_cast<int>(out.pivots.size());
  return out;
}

IntMat kernel(const IntMat& a) {
  const int m = static_cast<int>(a.rows());
  if (m == 0) return IntMat(0, 0);
  HnfTransform ht = hnf_with_transform(a);
  IntMat raw = ht.u.bottomRows(m - ht.rank);
  return hnf(std::move(raw));
}

SnfTransform snf_with_transforms(IntMat a) {
  SnfTransform out;
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  out.u = IntMat::Identity(m, m);
  out.v = IntMat::Identity(n, n);
  int t = 0;
  while (true) {
    /* Smallest |entry| in the trailing block, ties by (row, col). */
    int pi = -1, pj = -1;
    Int best = 0;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j) {
        if (a(i, j) == 0) continue;
        Int mag = a(i, j) < 0 ? Int(-a(i, j)) : a(i, j);
        if (pi < 0 || mag < best) {
          best = mag;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;
    if (pi != t) {
      a.row(pi).swap(a.row(t));
      out.u.row(pi).swap(out.u.row(t));
    }
    if (pj != t) {
      a.col(pj).swap(a.col(t));
      out.v.col(pj).swap(out.v.col(t));
    }
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (int i = t + 1; i < m; ++i) {
        if (a(i, t) == 0) continue;
        Int p = a(t, t), b = a(i, t), s, tt;
        if (b % p == 0) {
          /* Plain clearing keeps the pivot row untouched; the gcd form below
             may swap content into it and would ping-pong when |p| = g. */
          Int q = b / p;
          a.row(i) -= q * a.row(t);
          out.u.row(i) -= q * out.u.row(t);
          continue;
        }
        Int g = xgcd(p, b, s, tt);
        IntVec rt = s * a.row(t) + tt * a.row(i);
        IntVec ri = (p / g) * a.row(i) - (b / g) * a.row(t);
        a.row(t) = rt;
        a.row(i) = ri;
        IntVec ut = s * out.u.row(t) + tt * out.u.row(i);
        IntVec ui = (p / g) * out.u.row(i) - (b / g) * out.u.row(t);
        out.u.row(t) = ut;
        out.u.row(i) = ui;
      }
      for (int j = t + 1; j < n; ++j) {
        if (a(t, j) == 0) continue;
        Int p = a(t, t), b = a(t, j), s, tt;
        if (b % p == 0) {
          Int q = b / p;
          a.col(j) -= q * a.col(t);
          out.v.col(j) -= q * out.v.col(t);
          continue;  // pivot column untouched, nothing to recheck
        }
        Int g = xgcd(p, b, s, tt);
        Eigen::Matrix<Int, Eigen::Dynamic, 1> ct = s * a.col(t) + tt * a.col(j);
        Eigen::Matrix<Int, Eigen::Dynamic, 1> cj = (p / g) * a.col(j) - (b / g) * a.col(t);
        a.col(t) = ct;
        a.col(j) = cj;
        Eigen::Matrix<Int, Eigen::Dynamic, 1> vt = s * out.v.col(t) + tt * out.v.col(j);
        Eigen::Matrix<Int, Eigen::Dynamic, 1> vj = (p / g) * out.v.col(j) - (b / g) * out.v.col(t);
        out.v.col(t) = vt;
        out.v.col(j) = vj;
        dirty = true;  // gcd column ops can refill the pivot column
      }
      if (dirty) {
        for (int i = t + 1; i < m; ++i)
          if (a(i, t) != 0) goto recheck;
        dirty = false;
      recheck:;
      }
    }
    /* Divisibility: every trailing entry must be a multiple of the pivot. */
    bool fixed = true;
    for (int i = t + 1; i < m && fixed; ++i)
      for (int j = t + 1; j < n && fixed; ++j)
        if (a(i, j) % a(t, t) != 0) {
          a.row(t) += a.row(i);
          out.u.row(t) += out.u.row(i);
          fixed = false;
        }
    if (!fixed) continue;  // redo clearing with the merged row
    if (a(t, t) < 0) {
      a.row(t) = -a.row(t);
      out.u.row(t) = -out.u.row(t);
    }
    ++t;
  }
  out.d = std::move(a);
  out.rank = t;
  return out;
}

std::vector<Int> snf_invariants(IntMat a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  SnfTransform s = snf_with_transforms(std::move(a));
  std::vector<Int> out;
  for (int i = 0; i < s.rank; ++i) out.push_back(s.d(i, i));
  return out;
}

namespace {

Int small_det(const IntMat& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 1) return a(0, 0);
  Int det = 0;
  for (int j = 0; j < n; ++j) {
    if (a(0, j) == 0) continue;
    IntMat minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = a(r, c);
      }
    }
    Int term = a(0, j) * small_det(minor);
    det += (j % 2 == 0) ? term : Int(-term);
  }
  return det;
}

void subsets(int n, int k, std::vector<int>& cur, int start,
             const std::function<void(const std::vector<int>&)>& fn) {
  if (static_cast<int>(cur.size()) == k) {
    fn(cur);
    return;
  }
  for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
    cur.push_back(i);
    subsets(n, k, cur, i + 1, fn);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Int> determinantal_divisors(const IntMat& a, int upto) {
  std::vector<Int> out;
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  for (int k = 1; k <= upto && k <= std::min(m, n); ++k) {
    Int g = 0;
    std::vector<int> rows_sel, cols_sel;
    subsets(m, k, rows_sel, 0, [&](const std::vector<int>& rs) {
      subsets(n, k, cols_sel, 0, [&](const std::vector<int>& cs) {
        IntMat sub(k, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j)
            sub(i, j) = a(rs[static_cast<std::size_t>(i)], cs[static_cast<std::size_t>(j)]);
        Int d = small_det(sub);
        if (d < 0) d = -d;
        g = boost::multiprecision::gcd(g, d);
      });
    });
    out.push_back(g);
  }
  return out;
}

bool TruncatedLattice::contains(const IntVec& v) const {
  return coordinates(v).has_value();
}

std::optional<IntVec> TruncatedLattice::coordinates(const IntVec& v) const {
  if (v.size() != dim) throw SymringError("dimension mismatch in lattice query");
  IntVec r = v;
  IntVec c = IntVec::Zero(rank());
  for (int i = 0; i < rank(); ++i) {
    int p = pivots[static_cast<std::size_t>(i)];
    if (r(p) == 0) continue;
    if (r(p) % basis(i, p) != 0) return std::nullopt;
    Int q = r(p) / basis(i, p);
    r -= q * basis.row(i);
    c(i) = q;
  }
  for (int j = 0; j < r.size(); ++j)
    if (r(j) != 0) return std::nullopt;
  return c;
}

bool TruncatedLattice::contains_lattice(const TruncatedLattice& other) const {
  for (int i = 0; i < other.rank(); ++i)
    if (!contains(other.basis.row(i))) return false;
  return true;
}

bool TruncatedLattice::equals(const TruncatedLattice& other) const {
  if (dim != other.dim || rank() != other.rank()) return false;
  return basis == other.basis;  // HNF is unique per row space
}

TruncatedLattice lattice_from_rows(IntMat rows, int dim) {
  if (rows.rows() > 0 && rows.cols() != dim)
    throw SymringError("row width does not match lattice dimension");
  TruncatedLattice out;
  out.dim = dim;
  if (rows.rows() == 0) {
    out.basis = IntMat(0, dim);
    return out;
  }
  out.basis = hnf(std::move(rows));
  for (int i = 0; i < out.basis.rows(); ++i) {
    int p = -1;
    for (int j = 0; j < dim; ++j)
      if (out.basis(i, j) != 0) {
        p = j;
        break;
      }
    out.pivots.push_back(p);
  }
  return out;
}

TruncatedLattice lattice_sum(const TruncatedLattice& a, const TruncatedLattice& b) {
  if (a.dim != b.dim) throw SymringError("lattice sum dimension mismatch");
  IntMat stacked(a.rank() + b.rank(), a.dim);
  stacked.topRows(a.rank()) = a.basis;
  stacked.bottomRows(b.rank()) = b.basis;
  return lattice_from_rows(std::move(stacked), a.dim);
}

TruncatedLattice lattice_intersection(const TruncatedLattice& a,
                                      const TruncatedLattice& b) {
  if (a.dim != b.dim) throw SymringError("lattice intersection dimension mismatch");
  if (a.rank() == 0 || b.rank() == 0) return lattice_from_rows(IntMat(0, a.dim), a.dim);
  IntMat stacked(a.rank() + b.rank(), a.dim);
  stacked.topRows(a.rank()) = a.basis;
  stacked.bottomRows(b.rank()) = b.basis;
  IntMat k = kernel(stacked);
  IntMat rows(k.rows(), a.dim);
  for (int i = 0; i < k.rows(); ++i)
    rows.row(i) = k.row(i).head(a.rank()) * a.basis;
  return lattice_from_rows(std::move(rows), a.dim);
}

TruncatedLattice lattice_intersect_kernel(const TruncatedLattice& l, const IntMat& d) {
  if (l.dim != d.rows()) throw SymringError("kernel map dimension mismatch");
  if (l.rank() == 0) return l;
  IntMat folded = l.basis * d;
  IntMat k = kernel(folded);
  IntMat rows = k * l.basis;
  return lattice_from_rows(std::move(rows), l.dim);
}

QuotientInvariants quotient_invariants(const TruncatedLattice& a,
                                       const TruncatedLattice& b) {
  IntMat c(b.rank(), a.rank());
  for (int i = 0; i < b.rank(); ++i) {
    auto coords = a.coordinates(b.basis.row(i));
    if (!coords) throw SymringError("quotient denominator escapes numerator lattice");
    c.row(i) = *coords;
  }
  QuotientInvariants out;
  std::vector<Int> d = snf_invariants(std::move(c));
  out.free_rank = a.rank() - static_cast<long long>(d.size());
  for (auto& x : d)
    if (x > 1) out.torsion.push_back(x);
  return out;
}

std::vector<Int> QuotientClassifier::moduli() const {
  std::vector<Int> out;
  for (const auto& d : diag)
    if (d > 1) out.push_back(d);
  for (int i = rel_rank; i < a.rank(); ++i) out.push_back(0);
  return out;
}

std::optional<std::vector<Int>> QuotientClassifier::class_coords(const IntVec& x) const {
  auto coords = a.coordinates(x);
  if (!coords) return std::nullopt;
  IntVec y = *coords * v;
  std::vector<Int> out;
  for (int i = 0; i < rel_rank; ++i) {
    if (diag[static_cast<std::size_t>(i)] <= 1) continue;
    Int m = diag[static_cast<std::size_t>(i)];
    Int r = y(i) % m;
    if (r < 0) r += m;
    out.push_back(r);
  }
  for (int i = rel_rank; i < a.rank(); ++i) out.push_back(y(i));
  return out;
}

bool QuotientClassifier::is_zero_class(const IntVec& x) const {
  auto c = class_coords(x);
  if (!c) throw SymringError("element escapes the numerator lattice");
  for (const auto& v_ : *c)
    if (v_ != 0) return false;
  return true;
}

QuotientClassifier make_classifier(TruncatedLattice a, const TruncatedLattice& b) {
  QuotientClassifier out;
  int ra = a.rank();
  out.a = std::move(a);
  if (b.rank() == 0) {
    out.v = IntMat::Identity(ra, ra);
    out.rel_rank = 0;
    return out;
  }
  IntMat c(b.rank(), ra);
  for (int i = 0; i < b.rank(); ++i) {
    auto coords = out.a.coordinates(b.basis.row(i));
    if (!coords) throw SymringError("quotient denominator escapes numerator lattice");
    c.row(i) = *coords;
  }
  SnfTransform s = snf_with_transforms(std::move(c));
  out.v = std::move(s.v);
  out.rel_rank = s.rank;
  for (int i = 0; i < s.rank; ++i) out.diag.push_back(s.d(i, i));
  return out;
}

SparseVec sparse_from_dense(const IntVec& v) {
  SparseVec out;
  for (int i = 0; i < v.size(); ++i)
    if (v(i) != 0) out.push_back({i, v(i)});
  return out;
}

IntVec sparse_to_dense(const SparseVec& v, int dim) {
  IntVec out = IntVec::Zero(dim);
  for (const auto& [c, x] : v) out(c) = x;
  return out;
}

namespace {

/* r = a + c*b, both sorted by column. */
SparseVec sparse_axpy(const SparseVec& a, const Int& c, const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i >= a.size() || b[j].first < a[i].first) {
      Int v = c * b[j].second;
      if (v != 0) out.push_back({b[j].first, std::move(v)});
      ++j;
    } else {
      Int v = a[i].second + c * b[j].second;
      if (v != 0) out.push_back({a[i].first, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVec sparse_scale(const Int& c, const SparseVec& a) {
  SparseVec out;
  out.reserve(a.size());
  for (const auto& [col, x] : a) out.push_back({col, c * x});
  return out;
}

}  // namespace

bool SparseEchelon::insert(SparseVec v) {
  SparseVec combo;
  if (track_) combo.push_back({static_cast<int>(inserted_), 1});
  ++inserted_;
  while (!v.empty()) {
    int c = v.front().first;
    auto it = rows_.find(c);
    if (it == rows_.end()) {
      if (v.front().second < 0) {
        v = sparse_scale(-1, v);
        combo = sparse_scale(-1, combo);
      }
      rows_.emplace(c, std::move(v));
      if (track_) combos_.emplace(c, std::move(combo));
      return true;
    }
    const SparseVec& row = it->second;
    const Int& p = row.front().second;
    const Int& a = v.front().second;
    if (a % p == 0) {
      Int q = a / p;
      v = sparse_axpy(v, -q, row);
      if (track_) combo = sparse_axpy(combo, -q, combos_.at(c));
    } else {
      Int s, t;
      Int g = xgcd(p, a, s, t);
      SparseVec new_row = sparse_axpy(sparse_scale(s, row), t, v);
      SparseVec new_v = sparse_axpy(sparse_scale(p / g, v), -(a / g), row);
      if (track_) {
        const SparseVec& rc = combos_.at(c);
        SparseVec new_rc = sparse_axpy(sparse_scale(s, rc), t, combo);
        SparseVec new_vc = sparse_axpy(sparse_scale(p / g, combo), -(a / g), rc);
        combos_[c] = std::move(new_rc);
        combo = std::move(new_vc);
      }
      it->second = std::move(new_row);
      v = std::move(new_v);
    }
  }
  return false;
}

bool SparseEchelon::reduces_to_zero(SparseVec v) const {
  while (!v.empty()) {
    int c = v.front().first;
    auto it = rows_.find(c);
    if (it == rows_.end()) return false;
    const Int& p = it->second.front().second;
    const Int& a = v.front().second;
    if (a % p != 0) return false;
    v = sparse_axpy(v, -(a / p), it->second);
  }
  return true;
}

std::optional<SparseVec> SparseEchelon::membership_combo(SparseVec v) const {
  if (!track_) throw SymringError("echelon built without combination tracking");
  SparseVec combo;
  while (!v.empty()) {
    int c = v.front().first;
    auto it = rows_.find(c);
    if (it == rows_.end()) return std::nullopt;
    const Int& p = it->second.front().second;
    const Int& a = v.front().second;
    if (a % p != 0) return std::nullopt;
    Int q = a / p;
    combo = sparse_axpy(combo, q, combos_.at(c));
    v = sparse_axpy(v, -q, it->second);
  }
  return combo;
}

const SparseVec& SparseEchelon::combo_for(int pivot_col) const {
  return combos_.at(pivot_col);
}

IntMat SparseEchelon::slice_dense(int lo, int dim) const {
  std::vector<const SparseVec*> keep;
  for (const auto& [piv, row] : rows_)
    if (piv >= lo) keep.push_back(&row);
  IntMat out = IntMat::Zero(static_cast<int>(keep.size()), dim - lo);
  for (int i = 0; i < static_cast<int>(keep.size()); ++i)
    for (const auto& [col, x] : *keep[static_cast<std::size_t>(i)]) {
      if (col < lo) throw SymringError("echelon row crosses the slice boundary");
      out(i, col - lo) = x;
    }
  return out;
}

}  // namespace symring
