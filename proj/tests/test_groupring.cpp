#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symring/groupring.hpp"

using namespace symring;

namespace {
RingElement wm1(ContextPtr ctx, const std::string& w) {
  return re_word_minus_one(parse_word(ctx, w));
}
}  // namespace

TEST_CASE("ring arithmetic basics") {
  auto f2 = make_free_context({"a", "b"});
  RingElement x = re_mul(wm1(f2, "a"), wm1(f2, "b"));
  CHECK(format_ring(x) == "1*[[]] - 1*[a] - 1*[b] + 1*[a b]");
  CHECK(aug(x) == 0);
  CHECK(x.support_norm() == 2);

  RingElement y = re_sub(x, x);
  CHECK(y.is_zero());
  CHECK(format_ring(y) == "0");

  RingElement z = re_scale(3, wm1(f2, "a"));
  CHECK(format_ring(z) == "-3*[[]] + 3*[a]");
  CHECK(re_equal(re_add(z, re_neg(z)), re_zero(f2)));

  /* (a-1)(a^-1-1) = 2 - a - a^-1. */
  RingElement w = re_mul(wm1(f2, "a"), wm1(f2, "a^-1"));
  CHECK(format_ring(w) == "2*[[]] - 1*[a] - 1*[a^-1]");

  CHECK(re_word_minus_one(identity_word(f2)).is_zero());
}

TEST_CASE("ring laws on fixed samples") {
  auto f2 = make_free_context({"a", "b"});
  std::vector<RingElement> samples = {
      re_one(f2), wm1(f2, "a"), wm1(f2, "b^-1"),
      re_add(re_word(f2, parse_word(f2, "a b"), 2), wm1(f2, "a")),
      re_mul(wm1(f2, "a"), wm1(f2, "b"))};
  for (const auto& x : samples)
    for (const auto& y : samples) {
      CHECK(re_equal(re_add(x, y), re_add(y, x)));
      for (const auto& z : samples) {
        CHECK(re_equal(re_mul(re_mul(x, y), z), re_mul(x, re_mul(y, z))));
        CHECK(re_equal(re_mul(x, re_add(y, z)), re_add(re_mul(x, y), re_mul(x, z))));
      }
      CHECK(aug(re_mul(x, y)) == aug(x) * aug(y));
    }
}

TEST_CASE("parse round trip") {
  auto f2 = make_free_context({"a", "b"});
  RingElement x = parse_ring(f2, "2*[a b^-1] - 3*[[]] + 1*[b^2]");
  CHECK(x.terms.size() == 3);
  CHECK(aug(x) == 0);
  CHECK(re_equal(parse_ring(f2, format_ring(x)), x));
  CHECK(parse_ring(f2, "0").is_zero());
  CHECK(re_equal(parse_ring(f2, "1*[a] - 1*[a]"), re_zero(f2)));
  CHECK_THROWS_AS(parse_ring(f2, "a + b"), SymringError);
  CHECK_THROWS_AS(parse_ring(f2, "1*[a"), SymringError);
}

TEST_CASE("finite-coefficient collapse under a quotient transport") {
  auto f2 = make_free_context({"a", "b"});
  auto z2 = make_finite_context(GroupOracle::by_name("Z/2"));
  auto h = map_from_images(f2, z2, {parse_word(z2, "t"), identity_word(z2)});
  /* (a-1)(b-1) dies because b maps to the identity. */
  CHECK(re_apply(h, re_mul(wm1(f2, "a"), wm1(f2, "b"))).is_zero());
  /* (a-1)^2 = a^2 - 2a + 1 -> (1 - t)^2-ish: 2 - 2t. */
  RingElement img = re_apply(h, re_mul(wm1(f2, "a"), wm1(f2, "a")));
  CHECK(format_ring(img) == "2*[[]] - 2*[t]");
}

TEST_CASE("finite group ring multiplication") {
  auto c4 = make_finite_context(GroupOracle::by_name("Z/4"));
  RingElement sq = re_mul(wm1(c4, "t"), wm1(c4, "t"));
  CHECK(format_ring(sq) == "1*[[]] - 2*[t] + 1*[t2]");
  RingElement cube = re_mul(sq, wm1(c4, "t"));
  CHECK(format_ring(cube) == "-1*[[]] + 3*[t] - 3*[t2] + 1*[t3]");
  /* (t-1)^4 has a fold-back through t^4 = e. */
  RingElement fourth = re_mul(cube, wm1(c4, "t"));
  CHECK(format_ring(fourth) == "2*[[]] - 4*[t] + 6*[t2] - 4*[t3]");
}

TEST_CASE("windows, vectorize, reindex") {
  auto f2 = make_free_context({"a", "b"});
  BasisWindow w2 = make_window(f2, 2);
  CHECK(w2.dim() == 17);
  CHECK(w2.index_of(identity_word(f2)) == 0);
  CHECK(w2.index_of(parse_word(f2, "a b a")) == -1);

  RingElement x = re_mul(wm1(f2, "a"), wm1(f2, "b"));
  IntVec v = vectorize(x, w2);
  CHECK(v(0) == 1);
  CHECK(re_equal(devectorize(v, w2), x));

  BasisWindow w3 = make_window(f2, 3);
  IntVec v3 = reindex(v, w2, w3);
  CHECK(re_equal(devectorize(v3, w3), x));
  /* Window order is norm-graded, so the first 17 coordinates agree. */
  for (int i = 0; i < 17; ++i) CHECK(v3(i) == v(i));

  RingElement big = wm1(f2, "a b a");
  CHECK_THROWS_AS(vectorize(big, w2), SupportEscape);
  try {
    vectorize(big, w2);
  } catch (const SupportEscape& e) {
    CHECK(e.word_text == "a b a");
  }
}
