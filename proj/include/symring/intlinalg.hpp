#pragma once

#include "symring/ints.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace symring {

/* g = gcd(a,b) >= 0 with s*a + t*b = g. */
Int xgcd(const Int& a, const Int& b, Int& s, Int& t);

/* Row-style Hermite normal form: positive pivots, entries above a pivot
   reduced into [0, pivot), zero rows dropped. Unique for a given row space. */
IntMat hnf(IntMat a);

struct HnfTransform {
  IntMat h;                 // full m x n, first `rank` rows nonzero
  IntMat u;                 // unimodular m x m with u*a = h
  std::vector<int> pivots;  // pivot column per nonzero row
  int rank = 0;
};
HnfTransform hnf_with_transform(IntMat a);

/* Basis rows of {x : x*a = 0}, HNF-reduced. Saturated by construction. */
IntMat kernel(const IntMat& a);

/* Nonzero Smith invariants d1 | d2 | ... (positive). */
std::vector<Int> snf_invariants(IntMat a);

struct SnfTransform {
  IntMat d;  // m x n diagonal
  IntMat u;  // m x m unimodular
  IntMat v;  // n x n unimodular, u*a*v = d
  int rank = 0;
};
SnfTransform snf_with_transforms(IntMat a);

/* gcd of all k x k minors for k = 1..upto; brute-force cross-check oracle,
   only sensible for tiny matrices. */
std::vector<Int> determinantal_divisors(const IntMat& a, int upto);

/* Full-rank HNF basis of a sublattice of Z^dim. */
struct TruncatedLattice {
  int dim = 0;
  IntMat basis;  // rank x dim, HNF rows
  std::vector<int> pivots;

  int rank() const { return static_cast<int>(basis.rows()); }
  bool contains(const IntVec& v) const;
  /* c with c*basis = v, when it exists. */
  std::optional<IntVec> coordinates(const IntVec& v) const;
  bool contains_lattice(const TruncatedLattice& other) const;
  bool equals(const TruncatedLattice& other) const;
};

TruncatedLattice lattice_from_rows(IntMat rows, int dim);
TruncatedLattice lattice_sum(const TruncatedLattice& a, const TruncatedLattice& b);
TruncatedLattice lattice_intersection(const TruncatedLattice& a,
                                      const TruncatedLattice& b);
/* {x in L : x*d = 0}; cheap when d has few columns. */
TruncatedLattice lattice_intersect_kernel(const TruncatedLattice& l, const IntMat& d);

struct QuotientInvariants {
  long long free_rank = 0;
  std::vector<Int> torsion;  // entries > 1, divisibility-sorted
};
/* Invariants of a/b; requires b subset of a (throws otherwise). */
QuotientInvariants quotient_invariants(const TruncatedLattice& a,
                                       const TruncatedLattice& b);

/* Classifies elements of a modulo b. Coordinates come out as the torsion
   coords (reduced mod their modulus, moduli > 1 only) followed by the free
   coords; moduli() aligns, 0 = free. */
struct QuotientClassifier {
  TruncatedLattice a;
  IntMat v;               // SNF right transform
  std::vector<Int> diag;  // nonzero SNF diagonal of the relation matrix
  int rel_rank = 0;

  std::vector<Int> moduli() const;
  /* nullopt when x is not in a. */
  std::optional<std::vector<Int>> class_coords(const IntVec& x) const;
  bool is_zero_class(const IntVec& x) const;
};
QuotientClassifier make_classifier(TruncatedLattice a, const TruncatedLattice& b);

/* Sparse exact row echelon over Z. Rows are kept with distinct leading
   columns; insertion uses extended-gcd pivot combination, so the row set
   always spans the same lattice as everything inserted. Optionally tracks
   each row as a combination of inserted generators (by insertion index). */
using SparseVec = std::vector<std::pair<int, Int>>;  // sorted by column

SparseVec sparse_from_dense(const IntVec& v);
IntVec sparse_to_dense(const SparseVec& v, int dim);

class SparseEchelon {
 public:
  explicit SparseEchelon(bool track_combos = false) : track_(track_combos) {}

  /* Returns true when the vector increased the rank. */
  bool insert(SparseVec v);
  /* Division-only reduction; true when v lies in the current row lattice. */
  bool reduces_to_zero(SparseVec v) const;
  /* As above but returns the combination over insertion indices. Requires
     tracking. */
  std::optional<SparseVec> membership_combo(SparseVec v) const;

  int rank() const { return static_cast<int>(rows_.size()); }
  std::size_t inserted() const { return inserted_; }
  /* Pivot column -> row. */
  const std::map<int, SparseVec>& rows() const { return rows_; }
  const SparseVec& combo_for(int pivot_col) const;

  /* Dense basis of the row lattice restricted to columns [lo, dim): exactly
     the rows whose pivot is >= lo (leading-column argument), re-indexed. When
     a row with pivot >= lo touches a column < lo the structure is broken and
     this throws; cannot happen for echelon rows. */
  IntMat slice_dense(int lo, int dim) const;
  IntMat to_dense(int dim) const { return slice_dense(0, dim); }

 private:
  bool track_;
  std::size_t inserted_ = 0;
  std::map<int, SparseVec> rows_;
  std::map<int, SparseVec> combos_;
};

}  // namespace symring
