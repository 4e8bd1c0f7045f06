#pragma once

#include "symring/ints.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace symring {

/* Multiplication oracle for one factor group. Two kinds:
   - Integers: the infinite cyclic group, elements are exponents.
   - Finite: a validated multiplication table, elements are indices. */
struct GroupOracle {
  enum class Kind { Integers, Finite };

  Kind kind = Kind::Integers;
  std::string name = "Z";

  /* Finite data. table[a][b] = index of a*b. */
  std::vector<std::string> elements;
  std::vector<std::vector<int>> table;
  int identity = 0;
  std::vector<int> inverse;

  bool is_finite() const { return kind == Kind::Finite; }
  int order() const { return is_finite() ? static_cast<int>(elements.size()) : 0; }
  int mul(int a, int b) const { return table[a][b]; }
  int inv(int a) const { return inverse[a]; }
  int pow(int a, long long e) const;
  int element_index(const std::string& elem_name) const;

  /* Checks identity row/column, two-sided inverses, associativity (cubic). */
  void validate() const;

  static std::shared_ptr<const GroupOracle> integers();
  static std::shared_ptr<const GroupOracle> finite_from_table(
      std::string name, std::vector<std::string> elements, int identity,
      std::vector<std::vector<int>> table);
  /* Accepted names: Z, Z/2, Z/3, Z/4, S3, Q8, D4, (Z/2)^2, (Z/4)^2. */
  static std::shared_ptr<const GroupOracle> by_name(const std::string& name);
  static std::shared_ptr<const GroupOracle> direct_product(
      const std::shared_ptr<const GroupOracle>& a,
      const std::shared_ptr<const GroupOracle>& b);
  /* Parses {"name","elements","identity","table"} with table entries given
     as element names, row-major. Validates before returning. */
  static std::shared_ptr<const GroupOracle> from_json_text(const std::string& text);
};

using OraclePtr = std::shared_ptr<const GroupOracle>;

/* Ambient group: the free product of `copies` copies of one oracle group.
   Rank-r free group = r copies of Integers. A plain finite group = one copy
   of its table oracle. */
struct Context {
  OraclePtr oracle;
  int copies = 0;
  /* Display labels, one per copy; used by the word syntax for Integers. */
  std::vector<std::string> labels;

  bool single_finite() const { return oracle->is_finite() && copies == 1; }
  int label_index(const std::string& label) const;  // -1 when absent
};

using ContextPtr = std::shared_ptr<const Context>;

ContextPtr make_free_context(std::vector<std::string> labels);
ContextPtr make_product_context(OraclePtr oracle, int copies);
ContextPtr make_finite_context(OraclePtr oracle);
bool same_context(const Context& a, const Context& b);

/* One normal-form letter. Integers oracle: elem = nonzero exponent.
   Finite oracle: elem = non-identity element index. Adjacent syllables of a
   normalized word always sit in distinct copies. */
struct Syllable {
  int copy = 0;
  long long elem = 0;
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

struct Word {
  ContextPtr ctx;
  std::vector<Syllable> syllables;

  bool is_identity() const { return syllables.empty(); }
  /* Sum of |exponent| over Integers syllables plus count of finite syllables. */
  long long norm() const;
  friend bool operator==(const Word& a, const Word& b) {
    return a.syllables == b.syllables;
  }
};

Word identity_word(ContextPtr ctx);
/* Normalizes an arbitrary syllable sequence (merges same-copy neighbors,
   drops trivial letters, cascades cancellations). */
Word make_word(ContextPtr ctx, std::vector<Syllable> raw);
Word multiply(const Word& a, const Word& b);
Word inverse(const Word& a);
Word power(const Word& a, long long e);
Word conjugate(const Word& a, const Word& by);  // by^-1 * a * by
Word commutator(const Word& a, const Word& b);  // a^-1 b^-1 a b
/* Left-normed: [[a1,a2],a3],... Requires at least one entry. */
Word left_normed_commutator(const std::vector<Word>& parts);

/* Total order: by norm, then syllable count, then lexicographic on
   (copy, |elem|, sign) for Integers / (copy, elem) for finite. */
bool word_less(const Word& a, const Word& b);
struct WordLess {
  bool operator()(const Word& a, const Word& b) const { return word_less(a, b); }
};
std::size_t word_hash(const Word& w);
struct WordHash {
  std::size_t operator()(const Word& w) const { return word_hash(w); }
};

/* Syntax: whitespace-separated tokens, `[]` for the identity.
   Integers copy: label with optional exponent (`a`, `y1^-3`).
   Finite copy: element name, `@copy` required when copies > 1, optional
   exponent (`g@2`, `-i^2`, `r@0^-1`). */
std::string format_word(const Word& w);
Word parse_word(ContextPtr ctx, const std::string& text);

/* All normalized words of norm <= radius, sorted by word_less.
   Throws when the count would exceed max_cells. */
std::vector<Word> enumerate_ball(ContextPtr ctx, int radius,
                                 std::size_t max_cells = 0);
std::size_t default_max_cells();

/* Homomorphism determined on copies. Integers copy: Kill, Relabel (exponent
   preserved) or Image (base word of the target, exponentiated). Finite copy:
   Kill or Relabel with an element map that must itself be a homomorphism. */
struct CopyRule {
  enum class Kind { Kill, Relabel, Image };
  Kind kind = Kind::Kill;
  int target_copy = -1;               // Relabel
  std::vector<int> elem_map;          // Relabel, finite source; empty = identity map
  Word image;                         // Image, Integers source
};

struct GeneratorMap {
  ContextPtr src;
  ContextPtr dst;
  std::vector<CopyRule> rules;  // one per source copy

  Word apply(const Word& w) const;
  void validate() const;
};

GeneratorMap compose(const GeneratorMap& outer, const GeneratorMap& inner);
/* Convenience: source copy i maps to images[i] in dst. */
GeneratorMap map_from_images(ContextPtr src, ContextPtr dst, std::vector<Word> images);
/* Every copy relabels to itself. */
GeneratorMap identity_map(ContextPtr ctx);

/* Normal subgroup given by normal generators, optionally presented as the
   kernel of a homomorphism (enables exact membership tests). */
struct SubgroupSpec {
  std::string name;
  ContextPtr ctx;
  std::vector<Word> normal_gens;
  std::optional<GeneratorMap> kernel_of;

  bool has_membership() const { return kernel_of.has_value(); }
  bool contains(const Word& w) const;
  /* Checks every normal generator maps to the identity. */
  void validate() const;
};

/* One bracket entry of a witness: conj^-1 * gen * conj lies in
   specs[spec_index]. */
struct WitnessEntry {
  int spec_index = 0;
  int gen_index = 0;
  Word conjugator;
};

struct CommutatorWitness {
  Word value;                        // left-normed commutator of the entries
  std::vector<WitnessEntry> entries; // one per position, in bracket order
};

/* Deterministic enumeration over permutations of the specs (lexicographic),
   normal generators, and conjugators of norm <= depth (ball order). Witness
   i has entries (sigma(1..n)) with value the left-normed commutator of the
   conjugated generators. Stops after `count` witnesses. */
std::vector<CommutatorWitness> symmetric_commutator_witnesses(
    const std::vector<SubgroupSpec>& specs, int depth, int count);

}  // namespace symring
