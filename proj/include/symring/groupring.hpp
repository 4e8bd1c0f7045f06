#pragma once

#include "symring/groups.hpp"

#include <map>
#include <unordered_map>

namespace symring {

/* Finite slice of the group-ring basis: all words of norm <= radius in
   canonical order. Index 0 is the identity word. */
struct BasisWindow {
  ContextPtr ctx;
  int radius = 0;
  std::vector<Word> words;
  std::unordered_map<Word, int, WordHash> index;

  int dim() const { return static_cast<int>(words.size()); }
  /* -1 when the word lies outside the window. */
  int index_of(const Word& w) const {
    auto it = index.find(w);
    return it == index.end() ? -1 : it->second;
  }
};

BasisWindow make_window(ContextPtr ctx, int radius, std::size_t max_cells = 0);

/* Exact group-ring element with Int coefficients; zero coefficients are
   never stored. */
struct RingElement {
  ContextPtr ctx;
  std::map<Word, Int, WordLess> terms;

  bool is_zero() const { return terms.empty(); }
  long long support_norm() const;
};

RingElement re_zero(ContextPtr ctx);
RingElement re_one(ContextPtr ctx);
RingElement re_word(ContextPtr ctx, const Word& w, Int coeff = 1);
/* w - 1, the ubiquitous augmentation-ideal generator. */
RingElement re_word_minus_one(const Word& w);
RingElement re_add(const RingElement& a, const RingElement& b);
RingElement re_sub(const RingElement& a, const RingElement& b);
RingElement re_neg(const RingElement& a);
RingElement re_scale(const Int& c, const RingElement& a);
RingElement re_mul(const RingElement& a, const RingElement& b);
bool re_equal(const RingElement& a, const RingElement& b);
/* Sum of coefficients (augmentation). */
Int aug(const RingElement& a);
/* Coefficient-wise transport along a group homomorphism. */
RingElement re_apply(const GeneratorMap& f, const RingElement& a);

/* Grammar: signed terms `int '*' '[' word ']'`, e.g. `1*[a b^-1] - 2*[[]]`. */
std::string format_ring(const RingElement& a);
RingElement parse_ring(ContextPtr ctx, const std::string& text);

/* Throws SupportEscape when a term's word lies outside the window. */
IntVec vectorize(const RingElement& a, const BasisWindow& window);
RingElement devectorize(const IntVec& v, const BasisWindow& window);
/* Re-expresses window_from coordinates in window_to; throws SupportEscape
   when a nonzero coordinate's word is missing from window_to. */
IntVec reindex(const IntVec& v, const BasisWindow& from, const BasisWindow& to);

}  // namespace symring
