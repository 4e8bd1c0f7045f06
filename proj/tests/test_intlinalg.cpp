#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symring/intlinalg.hpp"

using namespace symring;

namespace {
IntMat mat(std::initializer_list<std::initializer_list<long long>> rows) {
  int m = static_cast<int>(rows.size());
  int n = m == 0 ? 0 : static_cast<int>(rows.begin()->size());
  IntMat out(m, n);
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (long long v : r) out(i, j++) = v;
    ++i;
  }
  return out;
}

IntVec vec(std::initializer_list<long long> xs) {
  IntVec out(static_cast<int>(xs.size()));
  int i = 0;
  for (long long v : xs) out(i++) = v;
  return out;
}

bool is_unimodular(const IntMat& u) {
  IntMat h = hnf(u);
  return h.rows() == u.rows() && h == IntMat::Identity(u.rows(), u.cols());
}
}  // namespace

TEST_CASE("extended gcd") {
  Int s, t;
  CHECK(xgcd(12, 18, s, t) == 6);
  CHECK(s * 12 + t * 18 == 6);
  CHECK(xgcd(-4, 6, s, t) == 2);
  CHECK(s * -4 + t * 6 == 2);
  CHECK(xgcd(0, -5, s, t) == 5);
  CHECK(t * -5 == 5);
  CHECK(xgcd(7, 0, s, t) == 7);
}

TEST_CASE("hermite normal form") {
  CHECK(hnf(mat({{2, 4}, {6, 8}})) == mat({{2, 0}, {0, 4}}));
  /* Row order and unimodular row mixing do not change the HNF. */
  CHECK(hnf(mat({{6, 8}, {2, 4}})) == mat({{2, 0}, {0, 4}}));
  CHECK(hnf(mat({{8, 12}, {2, 4}})) == hnf(mat({{2, 4}, {10, 16}})));
  /* Zero rows are dropped, negative pivots normalized. */
  CHECK(hnf(mat({{0, 0}, {-3, 0}})) == mat({{3, 0}}));
  /* Above-pivot entries are reduced into [0, pivot). */
  IntMat h = hnf(mat({{1, 7}, {0, 5}}));
  CHECK(h == mat({{1, 2}, {0, 5}}));

  HnfTransform ht = hnf_with_transform(mat({{3, 1, 2}, {1, 1, 1}, {5, 3, 4}}));
  CHECK(ht.u * mat({{3, 1, 2}, {1, 1, 1}, {5, 3, 4}}) == ht.h);
  CHECK(is_unimodular(ht.u));
  CHECK(ht.rank == 2);
  CHECK(ht.pivots == std::vector<int>{0, 1});
}

TEST_CASE("kernel is saturated and exact") {
  IntMat a = mat({{1, 2}, {2, 4}});
  IntMat k = kernel(a);
  REQUIRE(k.rows() == 1);
  CHECK(k.row(0) * a == IntVec::Zero(2));
  CHECK(k == mat({{2, -1}}));

  CHECK(kernel(mat({{1, 0}, {0, 1}})).rows() == 0);

  /* x*(3,3) = 0 over Z has kernel generated by a primitive vector even
     though the matrix has content 3. */
  IntMat b = mat({{3}, {3}});
  CHECK(kernel(b) == mat({{1, -1}}));
}

TEST_CASE("smith normal form invariants") {
  auto inv = snf_invariants(mat({{2, 0}, {0, 3}}));
  REQUIRE(inv.size() == 2);
  CHECK(inv[0] == 1);
  CHECK(inv[1] == 6);

  inv = snf_invariants(mat({{2, 4}, {6, 8}}));
  REQUIRE(inv.size() == 2);
  CHECK(inv[0] == 2);
  CHECK(inv[1] == 4);

  inv = snf_invariants(mat({{0, 0}, {0, 0}}));
  CHECK(inv.empty());

  IntMat a = mat({{6, 4, 2, 7}, {-3, 5, 0, 11}, {9, -1, 2, -4}});
  SnfTransform s = snf_with_transforms(a);
  CHECK(s.u * a * s.v == s.d);
  CHECK(is_unimodular(s.u));
  CHECK(is_unimodular(s.v));
  for (int i = 1; i < s.rank; ++i) CHECK(s.d(i, i) % s.d(i - 1, i - 1) == 0);

  /* Regression: unit pivots with mixed-sign entries in the same row used to
     ping-pong between the row and column passes forever. */
  inv = snf_invariants(mat({{1, 0, 2, -1}, {0, 1, 1, -1}, {0, 0, 4, -1}}));
  REQUIRE(inv.size() == 3);
  CHECK(inv[0] == 1);
  CHECK(inv[1] == 1);
  CHECK(inv[2] == 1);

  inv = snf_invariants(mat({{1, -1}, {1, 1}}));
  REQUIRE(inv.size() == 2);
  CHECK(inv[0] == 1);
  CHECK(inv[1] == 2);
}

TEST_CASE("smith invariants agree with determinantal divisors") {
  /* d_k(A) = prod of the first k invariants; independent brute-force route. */
  for (const IntMat& a :
       {mat({{2, 4, 4}, {-6, 6, 12}, {10, 4, 16}}),
        mat({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}),
        mat({{2, 0, 0, 1}, {0, 4, 2, 0}, {0, 0, 8, 3}})}) {
    auto inv = snf_invariants(a);
    auto dets = determinantal_divisors(a, static_cast<int>(inv.size()));
    Int prod = 1;
    for (std::size_t k = 0; k < inv.size(); ++k) {
      prod *= inv[k];
      CHECK(dets[k] == prod);
    }
  }
}

TEST_CASE("truncated lattices: membership and coordinates") {
  TruncatedLattice l = lattice_from_rows(mat({{2, 0}, {0, 3}}), 2);
  CHECK(l.rank() == 2);
  CHECK(l.contains(vec({2, 3})));
  CHECK(l.contains(vec({-4, 9})));
  CHECK(!l.contains(vec({1, 0})));
  CHECK(!l.contains(vec({0, 1})));
  auto c = l.coordinates(vec({4, 3}));
  REQUIRE(c.has_value());
  CHECK((*c)(0) == 2);
  CHECK((*c)(1) == 1);
  CHECK(*c * l.basis == vec({4, 3}));

  TruncatedLattice empty = lattice_from_rows(IntMat(0, 2), 2);
  CHECK(empty.rank() == 0);
  CHECK(!empty.contains(vec({1, 0})));
  CHECK(empty.contains(vec({0, 0})));
}

TEST_CASE("lattice sum and intersection") {
  TruncatedLattice a = lattice_from_rows(mat({{2, 0}, {0, 1}}), 2);
  TruncatedLattice b = lattice_from_rows(mat({{1, 0}, {0, 3}}), 2);
  CHECK(lattice_sum(a, b).equals(lattice_from_rows(mat({{1, 0}, {0, 1}}), 2)));
  CHECK(lattice_intersection(a, b).equals(lattice_from_rows(mat({{2, 0}, {0, 3}}), 2)));

  TruncatedLattice c = lattice_from_rows(mat({{2, 2}}), 2);
  TruncatedLattice d = lattice_from_rows(mat({{3, 3}}), 2);
  CHECK(lattice_intersection(c, d).equals(lattice_from_rows(mat({{6, 6}}), 2)));
  CHECK(lattice_intersection(c, lattice_from_rows(IntMat(0, 2), 2)).rank() == 0);

  CHECK(a.contains_lattice(lattice_intersection(a, b)));
  CHECK(b.contains_lattice(lattice_intersection(a, b)));
}

TEST_CASE("intersecting a lattice with a map kernel") {
  TruncatedLattice full = lattice_from_rows(mat({{1, 0}, {0, 1}}), 2);
  IntMat d = mat({{1}, {1}});  // coordinate sum
  TruncatedLattice k = lattice_intersect_kernel(full, d);
  CHECK(k.equals(lattice_from_rows(mat({{1, -1}}), 2)));

  /* Same answer as the generic route through an explicit kernel lattice. */
  TruncatedLattice ker = lattice_from_rows(kernel(d), 2);
  TruncatedLattice l = lattice_from_rows(mat({{2, 0}, {0, 3}}), 2);
  CHECK(lattice_intersect_kernel(l, d).equals(lattice_intersection(l, ker)));
}

TEST_CASE("quotient invariants and classifier") {
  TruncatedLattice z2full = lattice_from_rows(mat({{1, 0}, {0, 1}}), 2);
  TruncatedLattice sub = lattice_from_rows(mat({{2, 0}, {0, 3}}), 2);
  auto q = quotient_invariants(z2full, sub);
  CHECK(q.free_rank == 0);
  REQUIRE(q.torsion.size() == 1);
  CHECK(q.torsion[0] == 6);

  TruncatedLattice line = lattice_from_rows(mat({{2, 0}}), 2);
  q = quotient_invariants(z2full, line);
  CHECK(q.free_rank == 1);
  REQUIRE(q.torsion.size() == 1);
  CHECK(q.torsion[0] == 2);

  CHECK_THROWS_AS(quotient_invariants(sub, z2full), SymringError);

  QuotientClassifier cl = make_classifier(z2full, line);
  auto moduli = cl.moduli();
  REQUIRE(moduli.size() == 2);
  CHECK(moduli[0] == 2);
  CHECK(moduli[1] == 0);
  CHECK(!cl.is_zero_class(vec({1, 1})));
  CHECK(!cl.is_zero_class(vec({0, 5})));
  CHECK(cl.is_zero_class(vec({4, 0})));
  auto cc = cl.class_coords(vec({3, 2}));
  REQUIRE(cc.has_value());
  CHECK((*cc)[0] == 1);  // odd first coordinate
  /* Classes are additive mod the relation lattice. */
  auto c1 = cl.class_coords(vec({1, 1}));
  auto c2 = cl.class_coords(vec({3, 1}));
  CHECK((*c1)[0] == (*c2)[0]);
  CHECK((*c1)[1] == (*c2)[1]);
}

TEST_CASE("sparse echelon matches dense lattice computations") {
  IntMat rows = mat({{2, 4, 0, 0}, {0, 3, 1, 5}, {2, 7, 1, 5}, {4, 8, 0, 0}, {0, 0, 2, 10}});
  SparseEchelon ech(true);
  for (int i = 0; i < rows.rows(); ++i) ech.insert(sparse_from_dense(rows.row(i)));
  CHECK(ech.rank() == 3);
  TruncatedLattice dense = lattice_from_rows(rows, 4);
  TruncatedLattice viaech = lattice_from_rows(ech.to_dense(4), 4);
  CHECK(dense.equals(viaech));

  /* Division-only membership agrees with the lattice. */
  for (const IntVec& v : {vec({2, 4, 0, 0}), vec({2, 7, 1, 5}), vec({0, 0, 1, 5}),
                          vec({1, 2, 0, 0}), vec({0, 0, 0, 1})}) {
    CHECK(ech.reduces_to_zero(sparse_from_dense(v)) == dense.contains(v));
  }

  /* Tracked combinations reconstruct the member. */
  IntVec target = vec({2, 7, 1, 5});
  auto combo = ech.membership_combo(sparse_from_dense(target));
  REQUIRE(combo.has_value());
  IntVec rebuilt = IntVec::Zero(4);
  for (const auto& [gi, c] : *combo) rebuilt += c * rows.row(gi);
  CHECK(rebuilt == target);
}

TEST_CASE("echelon slice equals row space intersected with trailing coordinates") {
  IntMat rows = mat({{1, 1, 0}, {0, 2, 1}, {0, 0, 3}});
  SparseEchelon ech;
  for (int i = 0; i < rows.rows(); ++i) ech.insert(sparse_from_dense(rows.row(i)));
  IntMat sl = ech.slice_dense(1, 3);
  TruncatedLattice sliced = lattice_from_rows(sl, 2);
  CHECK(sliced.equals(lattice_from_rows(mat({{2, 1}, {0, 3}}), 2)));

  /* Independent route: intersect with the kernel of the first-coordinate
     projection, then drop that coordinate. */
  TruncatedLattice whole = lattice_from_rows(rows, 3);
  IntMat proj = mat({{1}, {0}, {0}});
  TruncatedLattice cut = lattice_intersect_kernel(whole, proj);
  IntMat dropped(cut.rank(), 2);
  for (int i = 0; i < cut.rank(); ++i)
    for (int j = 0; j < 2; ++j) dropped(i, j) = cut.basis(i, j + 1);
  CHECK(lattice_from_rows(dropped, 2).equals(sliced));
}
