#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symring/ideals.hpp"
#include "symring/simplicial.hpp"

using namespace symring;

namespace {

Word gen(const ContextPtr& ctx, int copy, long long e = 1) {
  return make_word(ctx, {{copy, e}});
}

}  // namespace

TEST_CASE("simplicial identities hold for free and finite levels") {
  CHECK(verify_simplicial_identities(GroupOracle::integers(), 4).empty());
  CHECK(verify_simplicial_identities(GroupOracle::by_name("Z/2"), 4).empty());
  CHECK(verify_simplicial_identities(GroupOracle::by_name("S3"), 3).empty());
}

TEST_CASE("level 2 faces and degeneracies act as pinned") {
  auto z = GroupOracle::integers();
  auto l2 = level_context(z, 2);
  Word x0 = gen(l2, 0), x1 = gen(l2, 1);

  CHECK(face_map(z, 2, 0).apply(x0).is_identity());
  CHECK(format_word(face_map(z, 2, 0).apply(x1)) == "x0");
  CHECK(format_word(face_map(z, 2, 1).apply(x0)) == "x0");
  CHECK(format_word(face_map(z, 2, 1).apply(x1)) == "x0");
  CHECK(format_word(face_map(z, 2, 2).apply(x0)) == "x0");
  CHECK(face_map(z, 2, 2).apply(x1).is_identity());

  auto l1 = level_context(z, 1);
  Word sigma = gen(l1, 0);
  CHECK(format_word(degeneracy_map(z, 1, 0).apply(sigma)) == "x1");
  CHECK(format_word(degeneracy_map(z, 1, 1).apply(sigma)) == "x0");
}

TEST_CASE("triangular coordinate changes invert each other") {
  for (int k = 1; k <= 4; ++k) {
    GeneratorMap to_y = to_y_coordinates(k);
    GeneratorMap from_y = from_y_coordinates(k);
    GeneratorMap round = compose(from_y, to_y);
    for (int i = 0; i < k; ++i) {
      Word xi = gen(to_y.src, i);
      CHECK(round.apply(xi) == xi);
      Word yi = gen(from_y.src, i);
      CHECK(compose(to_y, from_y).apply(yi) == yi);
    }
  }
  GeneratorMap to3 = to_y_coordinates(3);
  CHECK(format_word(to3.apply(gen(to3.src, 0))) == "y0 y1 y2");
  GeneratorMap from3 = from_y_coordinates(3);
  CHECK(format_word(from3.apply(gen(from3.src, 0))) == "x0 x1^-1");
  CHECK(format_word(from3.apply(gen(from3.src, 2))) == "x2");
}

TEST_CASE("face kernels test membership through their presenting map") {
  auto z = GroupOracle::integers();
  SubgroupSpec r0 = face_kernel(z, 2, 0);
  auto ctx = r0.ctx;
  Word x0 = gen(ctx, 0), x1 = gen(ctx, 1);
  CHECK(r0.contains(x0));
  CHECK(r0.contains(conjugate(x0, multiply(x1, x0))));
  CHECK_FALSE(r0.contains(x1));

  SubgroupSpec r1 = face_kernel(z, 2, 1);
  CHECK(r1.contains(multiply(x0, inverse(x1))));
  CHECK(r1.contains(commutator(x0, x1)));
  CHECK_FALSE(r1.contains(x0));

  SubgroupSpec r2 = face_kernel(z, 2, 2);
  CHECK(r2.contains(x1));
  CHECK_FALSE(r2.contains(multiply(x0, x1)));

  auto z2 = GroupOracle::by_name("Z/2");
  SubgroupSpec f1 = face_kernel(z2, 2, 1);
  auto fctx = f1.ctx;
  CHECK(f1.contains(multiply(gen(fctx, 0), gen(fctx, 1))));
  CHECK_FALSE(f1.contains(gen(fctx, 0)));
}

TEST_CASE("normalization projector: pinned values at free level 2") {
  auto z = GroupOracle::integers();
  auto l2 = level_context(z, 2);
  Word x0 = gen(l2, 0), x1 = gen(l2, 1);

  CHECK(moore_project(z, 2, x0).is_zero());
  CHECK(moore_project(z, 2, x1).is_zero());

  /* The opposite factor order already fails on this word. */
  Word w = multiply(x0, inverse(x1));
  RingElement p = moore_project(z, 2, w);
  CHECK(re_equal(p, parse_ring(l2, "-1*[[]] - 1*[x0] + 1*[x1] + 1*[x0 x1^-1]")));

  /* Degenerate words are annihilated. */
  auto l1 = level_context(z, 1);
  Word up0 = degeneracy_map(z, 1, 0).apply(power(gen(l1, 0), 2));
  Word up1 = degeneracy_map(z, 1, 1).apply(power(gen(l1, 0), -3));
  CHECK(moore_project(z, 2, up0).is_zero());
  CHECK(moore_project(z, 2, up1).is_zero());
}

TEST_CASE("projector output is fixed by the projector and killed by upper faces") {
  auto z = GroupOracle::integers();
  auto l2 = level_context(z, 2);
  for (const Word& w : enumerate_ball(l2, 2)) {
    RingElement p = moore_project(z, 2, w);
    RingElement again = re_zero(l2);
    for (const auto& [word, c] : p.terms)
      again = re_add(again, re_scale(c, moore_project(z, 2, word)));
    CHECK(re_equal(p, again));
    for (int j = 1; j <= 2; ++j)
      CHECK(re_apply(face_map(z, 2, j), p).is_zero());
  }
}

TEST_CASE("moore chain and cycle lattices match the ideal-kernel route") {
  auto oracles = std::vector<OraclePtr>{GroupOracle::integers(),
                                        GroupOracle::by_name("Z/2")};
  for (const auto& o : oracles) {
    for (int k = 1; k <= 2; ++k) {
      BasisWindow win = make_window(level_context(o, k), k == 1 ? 3 : 2);
      std::vector<SubgroupSpec> upper;
      for (int j = 1; j <= k; ++j) upper.push_back(face_kernel(o, k, j));
      CHECK(moore_chain_lattice(o, k, win).equals(
          exact_intersection_lattice(upper, win)));

      std::vector<SubgroupSpec> all = upper;
      all.insert(all.begin(), face_kernel(o, k, 0));
      CHECK(moore_cycle_lattice(o, k, win).equals(
          exact_intersection_lattice(all, win)));
    }
  }
}

TEST_CASE("level 1 chains are the augmentation ideal and equal the cycles") {
  auto z = GroupOracle::integers();
  BasisWindow win = make_window(level_context(z, 1), 3);
  TruncatedLattice chains = moore_chain_lattice(z, 1, win);
  CHECK(chains.equals(augmentation_lattice(win)));
  CHECK(chains.equals(moore_cycle_lattice(z, 1, win)));
}

TEST_CASE("boundaries sit inside cycles and the loop-space homology comes out") {
  auto z = GroupOracle::integers();

  /* Level 1, free rank grows with the probe until it stabilizes. */
  BasisWindow w1 = make_window(level_context(z, 1), 2);
  TruncatedLattice cyc1 = moore_cycle_lattice(z, 1, w1);
  TruncatedLattice b3 = moore_boundary_lattice(z, 1, w1, 3);
  TruncatedLattice b4 = moore_boundary_lattice(z, 1, w1, 4);
  CHECK(cyc1.contains_lattice(b3));
  CHECK(b3.equals(b4));
  QuotientInvariants h1 = quotient_invariants(cyc1, b3);
  CHECK(h1.free_rank == 1);
  CHECK(h1.torsion.empty());

  /* Level 2 over the integers: again infinite cyclic. */
  BasisWindow w2 = make_window(level_context(z, 2), 2);
  TruncatedLattice cyc2 = moore_cycle_lattice(z, 2, w2);
  TruncatedLattice c3 = moore_boundary_lattice(z, 2, w2, 3);
  TruncatedLattice c4 = moore_boundary_lattice(z, 2, w2, 4);
  CHECK(cyc2.contains_lattice(c3));
  CHECK(c3.equals(c4));
  QuotientInvariants h2 = quotient_invariants(cyc2, c3);
  CHECK(h2.free_rank == 1);
  CHECK(h2.torsion.empty());

  /* Determinism: thread count must not change the basis. */
  TruncatedLattice c3t = moore_boundary_lattice(z, 2, w2, 3, 0, 4);
  CHECK(c3.basis == c3t.basis);
}

TEST_CASE("order-two coefficients: level 2 homology class of order 2") {
  auto g = GroupOracle::by_name("Z/2");
  BasisWindow win = make_window(level_context(g, 2), 4);
  TruncatedLattice cyc = moore_cycle_lattice(g, 2, win);
  TruncatedLattice b5 = moore_boundary_lattice(g, 2, win, 5);
  TruncatedLattice b6 = moore_boundary_lattice(g, 2, win, 6);
  CHECK(cyc.contains_lattice(b5));
  CHECK(b5.equals(b6));
  QuotientInvariants h = quotient_invariants(cyc, b5);
  CHECK(h.free_rank == 0);
  REQUIRE(h.torsion.size() == 1);
  CHECK(h.torsion[0] == 2);

  /* The witness class: z = t@0 t@1 - t@1 t@0 is a cycle, not a boundary,
     while 2z is a boundary. */
  auto ctx = win.ctx;
  RingElement zclass = re_sub(re_word(ctx, multiply(gen(ctx, 0), gen(ctx, 1))),
                              re_word(ctx, multiply(gen(ctx, 1), gen(ctx, 0))));
  IntVec v = vectorize(zclass, win);
  CHECK(cyc.contains(v));
  CHECK_FALSE(b5.contains(v));
  CHECK(b5.contains(IntVec(2 * v)));
}

TEST_CASE("loop setup: face-indexed kernels over the y generators") {
  LoopSetup wu = wu_setup(1);
  REQUIRE(wu.specs.size() == 3);
  CHECK(wu.ctx->labels == std::vector<std::string>{"y0", "y1"});
  Word y0 = gen(wu.ctx, 0), y1 = gen(wu.ctx, 1);

  CHECK(wu.specs[0].name == "r0");
  CHECK(wu.specs[0].contains(multiply(y0, y1)));
  CHECK(wu.specs[0].contains(conjugate(multiply(y0, y1), y1)));
  CHECK_FALSE(wu.specs[0].contains(y0));
  CHECK(wu.specs[1].contains(y0));
  CHECK_FALSE(wu.specs[1].contains(y1));
  CHECK(wu.specs[2].contains(y1));
  CHECK_FALSE(wu.specs[2].contains(multiply(y0, y1)));

  /* Symmetric commutators of the three kernels land in the intersection. */
  for (const auto& wit : symmetric_commutator_witnesses(wu.specs, 1, 6))
    for (const auto& spec : wu.specs) CHECK(spec.contains(wit.value));

  LoopSetup wu2 = wu_setup(2);
  REQUIRE(wu2.specs.size() == 4);
  CHECK(wu2.specs[0].contains(
      multiply(gen(wu2.ctx, 0), multiply(gen(wu2.ctx, 1), gen(wu2.ctx, 2)))));
}

TEST_CASE("level surjection commutes with every face") {
  auto t = GroupOracle::by_name("Z/2");
  for (int k = 2; k <= 3; ++k) {
    GeneratorMap phi_k = level_surjection(k, t, 1);
    GeneratorMap phi_km1 = level_surjection(k - 1, t, 1);
    for (int j = 0; j <= k; ++j) {
      GeneratorMap lhs = compose(face_map(t, k, j), phi_k);
      GeneratorMap rhs = compose(phi_km1, face_map(GroupOracle::integers(), k, j));
      for (int i = 0; i < k; ++i) {
        Word xi = gen(phi_k.src, i);
        CHECK(lhs.apply(xi) == rhs.apply(xi));
      }
    }
  }
}

TEST_CASE("surjections carry inner boundaries into inner boundaries") {
  auto z = GroupOracle::integers();
  auto z2 = GroupOracle::by_name("Z/2");
  int k = 2, L = 2, probe = 3;
  BasisWindow wf = make_window(level_context(z, k), L);
  BasisWindow wg = make_window(level_context(z2, k), L);
  GeneratorMap h = level_surjection(k, z2, 1);
  TruncatedLattice bf = moore_boundary_lattice(z, k, wf, probe);
  TruncatedLattice bg = moore_boundary_lattice(z2, k, wg, probe);
  REQUIRE(bf.rank() > 0);
  for (int i = 0; i < bf.rank(); ++i) {
    RingElement x = devectorize(bf.basis.row(i), wf);
    CHECK(bg.contains(vectorize(re_apply(h, x), wg)));
  }
}

TEST_CASE("homology reports stabilize on the loop space of the circle") {
  auto z = GroupOracle::integers();

  BasisWindow w1 = make_window(level_context(z, 1), 3);
  HomologyReport h1 = homology_report(z, 1, w1);
  CHECK(h1.level == 1);
  CHECK(h1.window_radius == 3);
  CHECK(h1.cycle_rank == 6);
  REQUIRE(h1.steps.size() == 3);
  CHECK(h1.steps[0].probe == 3);
  CHECK(h1.steps[2].probe == 5);
  CHECK(h1.stabilized);
  CHECK(h1.free_rank == 1);
  CHECK(h1.torsion.empty());

  /* The generating class is the sigma-minus-one cycle. */
  REQUIRE(h1.witness_found);
  RingElement sigma = re_sub(re_word(w1.ctx, gen(w1.ctx, 0)), re_one(w1.ctx));
  CHECK(re_equal(h1.witness, sigma));
  REQUIRE(h1.witness_coords.size() == 1);
  CHECK(h1.witness_moduli == std::vector<Int>{0});
  /* A free class has no boundary preimage, nor does its double. */
  CHECK_FALSE(boundary_preimage(z, 1, w1, 5, h1.witness).has_value());
  CHECK_FALSE(boundary_preimage(z, 1, w1, 5, re_scale(2, h1.witness)).has_value());

  BasisWindow w2 = make_window(level_context(z, 2), 3);
  HomologyReport h2 = homology_report(z, 2, w2);
  CHECK(h2.stabilized);
  CHECK(h2.free_rank == 1);
  CHECK(h2.torsion.empty());
  CHECK(h2.witness_found);
  CHECK(h2.witness_moduli == std::vector<Int>{0});

  /* Explicit schedules must cover the window. */
  CHECK_THROWS_WITH(homology_report(z, 1, w1, {2}),
                    "probe radius below the report window");
}

TEST_CASE("order-two class carries a replayable boundary certificate") {
  auto g = GroupOracle::by_name("Z/2");
  BasisWindow win = make_window(level_context(g, 2), 4);
  HomologyReport h = homology_report(g, 2, win);
  CHECK(h.stabilized);
  CHECK(h.free_rank == 0);
  REQUIRE(h.torsion.size() == 1);
  CHECK(h.torsion[0] == 2);
  for (const auto& step : h.steps) {
    CHECK(step.free_rank == 0);
    CHECK(step.torsion == std::vector<Int>{2});
  }

  REQUIRE(h.witness_found);
  CHECK(h.witness_coords == std::vector<Int>{1});
  CHECK(h.witness_moduli == std::vector<Int>{2});

  /* 2z bounds and the returned chain replays through face 0; z does not. */
  RingElement twice = re_scale(2, h.witness);
  auto chain = boundary_preimage(g, 2, win, 6, twice);
  REQUIRE(chain.has_value());
  CHECK(re_equal(re_apply(face_map(g, 3, 0), *chain), twice));
  CHECK_FALSE(boundary_preimage(g, 2, win, 6, h.witness).has_value());

  /* Same report regardless of thread count. */
  HomologyReport ht = homology_report(g, 2, win, {}, 0, 4);
  CHECK(ht.free_rank == h.free_rank);
  CHECK(ht.torsion == h.torsion);
  CHECK(re_equal(ht.witness, h.witness));
  CHECK(ht.witness_coords == h.witness_coords);
}
