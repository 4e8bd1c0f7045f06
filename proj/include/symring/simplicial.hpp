#pragma once

#include "symring/groupring.hpp"
#include "symring/intlinalg.hpp"

namespace symring {

/* Level k of the loop construction on a group: the free product of k copies.
   Level 0 is the trivial group. Integers oracle gives F(x0..x_{k-1}). */
ContextPtr level_context(OraclePtr oracle, int k);

/* Face j (0 <= j <= k), level k -> k-1: copy i goes to i for i < j and to
   i-1 for i >= j; copies leaving [0, k-2] are killed. */
GeneratorMap face_map(OraclePtr oracle, int k, int j);
/* Degeneracy j (0 <= j <= k), level k -> k+1: copy i goes to i+1 for i >= j
   and stays put otherwise. */
GeneratorMap degeneracy_map(OraclePtr oracle, int k, int j);

/* Checks all five simplicial-identity families on every generator of every
   level up to max_level. Returns human-readable descriptions of failures. */
std::vector<std::string> verify_simplicial_identities(OraclePtr oracle, int max_level);

/* Triangular coordinate change at free level k: y_j = x_j x_{j+1}^-1 for
   j < k-1 and y_{k-1} = x_{k-1}; inverse substitutes x_j = y_j y_{j+1}..y_{k-1}. */
GeneratorMap to_y_coordinates(int k);    // F(x...) -> F(y...)
GeneratorMap from_y_coordinates(int k);  // F(y...) -> F(x...)

/* Kernel of face j at level k with its standard normal generators:
   j = 0 kills copy 0, j = k kills copy k-1, and 0 < j < k identifies copies
   j-1 and j, so the kernel is the normal closure of the corresponding
   difference words. */
SubgroupSpec face_kernel(OraclePtr oracle, int k, int j);

/* Level map sending free generator x_i to the chosen element in copy i;
   commutes with all faces and degeneracies by construction. */
GeneratorMap level_surjection(int k, OraclePtr target, int element);

/* Normalization projector P = (1-e_1)...(1-e_k), e_j = s_{j-1} del_j,
   rightmost factor applied first. Image = intersection of ker del_j for
   j = 1..k; fixes that subspace pointwise; kills degenerate words; never
   increases support norm. */
RingElement moore_project(OraclePtr oracle, int k, const Word& w);

/* Exact lattice of Moore chains supported on the window: spanned by P(w)
   over the window's words. */
TruncatedLattice moore_chain_lattice(OraclePtr oracle, int k, const BasisWindow& window);
/* Chains killed by del_0 as well. */
TruncatedLattice moore_cycle_lattice(OraclePtr oracle, int k, const BasisWindow& window);
/* del_0-images of level-(k+1) Moore chains supported on ball(probe_radius),
   cut down exactly to the span of the window. Monotone in probe_radius. */
TruncatedLattice moore_boundary_lattice(OraclePtr oracle, int k,
                                        const BasisWindow& window, int probe_radius,
                                        std::size_t max_cells = 0, int threads = 1);

/* Level n+1 data for the free construction in y-coordinates: context
   F(y0..yn) plus the n+2 face kernels r_j = ker del_j, indexed by face.
   r_0 is the normal closure of y0 y1 .. yn and r_{j+1} that of y_j. */
struct LoopSetup {
  ContextPtr ctx;
  std::vector<SubgroupSpec> specs;
};
LoopSetup wu_setup(int n);

/* Invariants of (cycles / inner boundaries) across a probe-radius schedule.
   The denominator only grows with the probe radius, so torsion and free
   rank shown are upper quotients of the true homology; stabilization is
   evidence, membership of a multiple in the boundary is certifiable. */
struct HomologyStep {
  int probe = 0;
  long long boundary_rank = 0;
  long long free_rank = 0;
  std::vector<Int> torsion;  // divisibility-sorted, entries > 1
};
struct HomologyReport {
  int level = 0;
  int window_radius = 0;
  long long cycle_rank = 0;
  std::vector<HomologyStep> steps;
  bool stabilized = false;  // last two steps agree on the invariants
  long long free_rank = 0;          // of the final step
  std::vector<Int> torsion;         // of the final step
  /* Smallest-norm window word whose Moore projection is a cycle outside the
     final inner boundary, with its class in cycles/boundary. */
  bool witness_found = false;
  RingElement witness;
  std::vector<Int> witness_coords;
  std::vector<Int> witness_moduli;
  std::string semantics;
};
HomologyReport homology_report(OraclePtr oracle, int k, const BasisWindow& window,
                               std::vector<int> probe_schedule = {},
                               std::size_t max_cells = 0, int threads = 1);

/* {L, L+1, L+2}. */
std::vector<int> default_probe_schedule(int window_radius);

/* Level-(k+1) Moore chain whose face-0 image equals x exactly, found inside
   the probe ball; nullopt when x is outside that inner boundary lattice. */
std::optional<RingElement> boundary_preimage(OraclePtr oracle, int k,
                                             const BasisWindow& window,
                                             int probe_radius, const RingElement& x,
                                             std::size_t max_cells = 0);

}  // namespace symring
