#pragma once

#include "symring/groupring.hpp"
#include "symring/intlinalg.hpp"

#include <optional>

namespace symring {

/* Window slice of the augmentation ideal: vectors with coefficient sum 0. */
TruncatedLattice augmentation_lattice(const BasisWindow& window);

/* Exact window slice of the relative augmentation ideal of a kernel-presented
   normal subgroup: the kernel of the coefficient transport along the
   presenting homomorphism, computed fiber by fiber. */
TruncatedLattice exact_ideal_lattice(const SubgroupSpec& spec, const BasisWindow& window);
/* Dense cross-check route for tests: kernel of the full transport matrix. */
TruncatedLattice exact_ideal_lattice_dense(const SubgroupSpec& spec,
                                           const BasisWindow& window);

/* Exact window slice of the intersection of several such ideals. */
TruncatedLattice exact_intersection_lattice(const std::vector<SubgroupSpec>& specs,
                                            const BasisWindow& window);

/* Sum of ordered products of ideals, by spec index. */
struct ProductExpr {
  std::vector<std::vector<int>> orders;

  static ProductExpr ordered(std::vector<int> seq);
  /* All permutations of the index list, lexicographic. */
  static ProductExpr symmetric_of(std::vector<int> indices);
  static ProductExpr symmetric(int n);
};

/* One product-ideal membership witness row: coeff * left *
   prod_j (member_j - 1) * right, member_j in the subgroup of ideal_index_j. */
struct CertBracket {
  Word member;
  int ideal_index = 0;
};
struct CertRow {
  Int coeff = 1;
  Word left;
  std::vector<CertBracket> brackets;
  Word right;
};
struct Certificate {
  ContextPtr ctx;
  std::vector<std::string> ideal_names;
  std::vector<std::vector<int>> expression;  // admissible bracket sequences
  RingElement target;
  std::vector<CertRow> rows;
};

RingElement certificate_row_value(const CertRow& row);
struct CertificateCheck {
  bool valid = false;
  std::vector<std::string> errors;
};
/* Replays the rows in exact arithmetic: the sum must equal the target, every
   bracket member must lie in its subgroup (when specs are given), and every
   row's ideal sequence must match one of the expression's orders. */
CertificateCheck verify_certificate(const Certificate& cert,
                                    const std::vector<SubgroupSpec>* specs);

struct InnerProductOptions {
  int budget = 4;           // total norm budget for generator tuples
  bool track = false;       // keep combination data for certificates
  std::size_t max_cells = 0;
  int threads = 1;
};

/* Lattice of everything provably inside the product-ideal expression with
   generator tuples of total norm <= budget, cut exactly to the window.
   Generators are u (g1-1) t1 (g2-1) t2 ... (gm-1) v with g_j running over
   the normal generators of the j-th ideal in an order and u, t_j, v over
   balls; the tuple norm |u| + sum|g_j| + sum|t_j| + |v| bounds the support.
   Monotone in budget and in the window radius. */
class InnerProductLattice {
 public:
  const TruncatedLattice& lattice() const { return lattice_; }
  /* Enumerated generator tuples (tracked or not). */
  std::size_t generator_count() const { return gen_total_; }
  int budget() const { return budget_; }

  bool contains(const RingElement& x) const;
  /* Membership certificate; requires track. nullopt when x is not inside. */
  std::optional<Certificate> certify(const RingElement& x) const;

 private:
  friend InnerProductLattice inner_product_lattice(const std::vector<SubgroupSpec>&,
                                                   const ProductExpr&,
                                                   const BasisWindow&,
                                                   const InnerProductOptions&);
  struct Gen {
    std::vector<int> order;
    Word u, v;
    std::vector<Word> gs;  // chosen normal generators, one per bracket
    std::vector<Word> ts;  // interleaved words, size m-1
  };
  CertRow gen_to_row(const Gen& g, const Int& coeff) const;

  BasisWindow window_;
  ContextPtr ctx_;
  std::vector<std::string> ideal_names_;
  std::vector<std::vector<int>> expression_;
  int budget_ = 0;
  TruncatedLattice lattice_;
  SparseEchelon echelon_{true};
  std::vector<Gen> gens_;
  std::size_t gen_total_ = 0;
  bool tracked_ = false;
  int window_col_base_ = 0;
};

InnerProductLattice inner_product_lattice(const std::vector<SubgroupSpec>& specs,
                                          const ProductExpr& expr,
                                          const BasisWindow& window,
                                          const InnerProductOptions& opts);

/* Constructive membership for a symmetric-commutator value:
   [u,v] - 1 = u^-1 v^-1 ((u-1)(v-1) - (v-1)(u-1)) and its left-normed
   iterates, yielding rows whose bracket sequences cover the permutations the
   expression demands. entries[i] = (ideal index, member word). */
Certificate commutator_certificate(const std::vector<std::pair<int, Word>>& entries,
                                   const std::vector<std::string>& ideal_names);

/* Ideal lattices in the group ring of a finite quotient, dim = |H|.
   Transported ideal = two-sided closure of {h(gen) - 1}. */
TruncatedLattice finite_ideal_lattice(const SubgroupSpec& spec, const GeneratorMap& h,
                                      const BasisWindow& quotient_window);
TruncatedLattice finite_product_lattice(const std::vector<SubgroupSpec>& specs,
                                        const ProductExpr& expr, const GeneratorMap& h,
                                        const BasisWindow& quotient_window);

struct QuotientProbe {
  std::string name;
  GeneratorMap hom;  // free context -> one-copy finite context
};
/* (Z/2)^r and (Z/4)^r on the abelianization, plus D4 and Q8 for rank 2. */
std::vector<QuotientProbe> default_quotient_schedule(const ContextPtr& free_ctx);

enum class MembershipStatus { In, Out, Unknown };
struct MembershipVerdict {
  MembershipStatus status = MembershipStatus::Unknown;
  std::optional<Certificate> certificate;  // In: membership rows
  std::string quotient;                    // Out: separating quotient name
  int budget_used = 0;                     // In: tuple budget that sufficed
};

struct DSubgroupOptions {
  int window_radius = 3;
  std::vector<int> budget_schedule = {4, 5, 6};
  std::size_t max_cells = 0;
  int threads = 1;
  std::vector<QuotientProbe> quotients;  // empty = default schedule
};

/* Decides g - 1 in the product expression when possible: certified In by an
   inner-lattice certificate, certified Out by a finite quotient where the
   transported element escapes the transported expression lattice. */
MembershipVerdict d_subgroup_test(const Word& g, const std::vector<SubgroupSpec>& specs,
                                  const ProductExpr& expr, const DSubgroupOptions& opts);

/* {L, L+1, ..., 2L+2}. */
std::vector<int> default_budget_schedule(int window_radius);

struct SweepOptions {
  std::vector<int> budgets;  // empty = default_budget_schedule(L)
  std::size_t max_cells = 0;
  int threads = 1;
  /* Disjoint-block saturation needs each spec's normal generators to touch
     pairwise disjoint generator copies; set to enforce that precondition. */
  bool require_disjoint_blocks = false;
};

struct SweepStep {
  int budget = 0;
  std::size_t generators = 0;
  long long inner_rank = 0;
  bool equals_exact = false;
  long long free_rank = 0;    // of exact/inner at this budget
  std::vector<Int> torsion;   // divisibility-sorted, entries > 1
};

/* Budget sweep of the inner product lattice against the exact intersection
   on one window. Every inner lattice is containment-checked against the
   exact one (violation = implementation bug, throws). saturated means some
   budget reached equality; an exhausted schedule is not a refutation. */
struct SaturationResult {
  int window_radius = 0;
  TruncatedLattice exact;
  TruncatedLattice inner;  // of the last budget run
  std::vector<SweepStep> steps;
  bool saturated = false;
  int saturated_at = -1;  // budget value, -1 when never
};
SaturationResult saturation_verify(const std::vector<SubgroupSpec>& specs,
                                   const ProductExpr& expr, const BasisWindow& window,
                                   const SweepOptions& opts);

/* Invariants of (exact intersection)/(inner product) across the schedule.
   Exact numerator over inner denominator: torsion shown is an upper
   quotient of the true one, free rank is evidence-level unless saturated. */
struct QReport {
  int window_radius = 0;
  long long exact_rank = 0;
  std::vector<SweepStep> steps;
  bool saturated = false;
  int saturated_at = -1;
  bool stabilized = false;  // last two steps agree on the invariants
  long long free_rank = 0;          // of the final step
  std::vector<Int> torsion;         // of the final step
  std::string semantics;            // honesty label for reports
};
QReport q_invariants_report(const std::vector<SubgroupSpec>& specs,
                            const ProductExpr& expr, const BasisWindow& window,
                            const SweepOptions& opts);

/* Class of (g-1) in (exact intersection)/(inner symmetric product) at one
   budget. Coordinates and moduli align, 0 = free. Requires g in every
   subgroup; support must fit the window. */
struct HurewiczClass {
  std::vector<Int> coords;
  std::vector<Int> moduli;
  bool zero = true;
};
HurewiczClass hurewicz_class(const Word& g, const std::vector<SubgroupSpec>& specs,
                             const BasisWindow& window, const InnerProductOptions& opts);

/* Shortlex coset transversal for the kernel of spec.kernel_of, found by
   scanning the canonical ball; validated prefix-closed. Throws when the
   index exceeds max_index or the scan radius is exhausted. */
std::vector<Word> schreier_transversal(const SubgroupSpec& spec, int max_index,
                                       int max_radius);
/* g = t * s with t in the transversal and s in the subgroup. */
std::pair<Word, Word> coset_decompose(const SubgroupSpec& spec,
                                      const std::vector<Word>& transversal,
                                      const Word& g);

}  // namespace symring
