#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gca/ca.hpp"
#include "gca/exact1d.hpp"
#include "gca/verdict.hpp"

namespace gca {

inline constexpr uint64_t kDefaultSearchBudget = uint64_t(1) << 26;

// Escalation schedule: window index n maps to ball(n0 + n), where n0 is the
// covering radius of the memory set, so the memory is inside every window and
// the windows are nested.
FiniteSubset escalation_window(const CellularAutomaton& ca, uint32_t n);

// Report on the set of window patterns that the window map sends to the
// all-neutral pattern while holding a non-neutral letter at the identity
// site. Emptiness is decided exactly.
struct KernelWindowReport {
  uint32_t n = 0;
  bool empty = false;
  std::optional<Pattern> sample;  // lexicographically least member, if any
  uint64_t visited = 0;           // backtracking nodes; 0 on the matrix path
};

// Group rules run a pruned backtracking search over the window domain;
// linear rules inspect the null space of the window matrix.
// NotAGroupOrLinearCA for rules with no verified algebraic structure.
KernelWindowReport kernel_window(const CellularAutomaton& ca, uint32_t n,
                                 uint64_t budget = kDefaultSearchBudget);
// Same test over an arbitrary window E; E*M must contain the identity.
KernelWindowReport kernel_window_over(const CellularAutomaton& ca,
                                      const FiniteSubset& E,
                                      uint64_t budget = kDefaultSearchBudget);

// Escalates n = 0..max_n and certifies injectivity at the first empty
// kernel window. Emptiness is inherited by larger windows; every certified
// run re-checks the three subsequent windows and records them in the
// transcript. A nonempty window never refutes injectivity on an infinite
// universe, so exhaustion returns Unknown(max_n).
Verdict certify_injective(const CellularAutomaton& ca, uint32_t max_n,
                          uint64_t budget = kDefaultSearchBudget);

// Searches for a witness of non-injectivity: an exhaustive configuration
// scan on finite universes; on Z^d and free groups, kernel elements with
// support in ball(r) for r <= bound, then (Z^d only) collisions among
// lattice-periodic configurations for every sublattice of index <= bound.
// Plain rules are supported on finite universes and quotients only.
Verdict refute_injective(const CellularAutomaton& ca, uint32_t bound,
                         uint64_t cap = kDefaultCap,
                         uint64_t budget = kDefaultSearchBudget);

// Garden-of-Eden search over the window E: CertifiedNo carries a pattern on
// E with no preimage; a full image only reports window consistency
// (Unknown), never surjectivity. Linear rules use the column space of the
// window matrix; everything else enumerates densely within cap.
Verdict goe_search(const CellularAutomaton& ca, const FiniteSubset& E,
                   uint64_t cap = kDefaultCap);

// Exact surjectivity on a finite universe by image enumeration (rank of the
// full window matrix for linear rules). CapExceeded beyond the cap.
Verdict check_surjective_finite(const CellularAutomaton& ca,
                                uint64_t cap = kDefaultCap);

struct InverseSynthesis {
  Verdict verdict;
  std::optional<CellularAutomaton> inverse;
};

// For r = 0..max_radius decides whether the letter at the identity site is a
// function of the window image on ball(r); if so, materializes that function
// as a local rule (outside the window image it returns the neutral letter),
// then verifies at the rule level that both composites with the original
// automaton are the identity. CertifiedYes carries the inverse rule.
InverseSynthesis synthesize_inverse(const CellularAutomaton& ca, uint32_t max_radius,
                                    uint64_t cap = kDefaultCap,
                                    uint64_t budget = kDefaultSearchBudget);

// Pre-injectivity: distinct configurations agreeing outside a finite set
// have distinct images. Finite universes reduce to injectivity (exact). For
// group/linear rules a finitely supported kernel element with support in
// ball(r), r <= support_radius, is a CertifiedNo witness. Scalar linear
// rules over Z^d are decided exactly: the Laurent ring is a domain, so any
// nonzero rule is pre-injective. UnsupportedCombination otherwise.
Verdict pre_injectivity(const CellularAutomaton& ca, uint32_t support_radius,
                        uint64_t cap = kDefaultCap,
                        uint64_t budget = kDefaultSearchBudget);

// Post-surjectivity: every configuration asymptotic to an image point has a
// preimage asymptotic to the original point. For group/linear rules it
// suffices to find finitely supported preimages of the single-site
// deviations at the identity; deviations supported in ball(deviation_radius)
// then lift within ball(deviation_radius + reported radius). Scalar linear
// rules over Z^d are decided exactly (preimages exist iff the rule is a
// single monomial). Finite universes reduce to surjectivity, exact for any
// rule class.
Verdict post_surjectivity(const CellularAutomaton& ca, uint32_t deviation_radius,
                          uint32_t search_radius, uint64_t cap = kDefaultCap,
                          uint64_t budget = kDefaultSearchBudget);

// De-Bruijn-graph oracle for the full-shift action of a one-dimensional
// automaton; exact for any rule body whose table fits the cap.
Exact1dResult exact_1d_oracle(const CellularAutomaton& ca, uint64_t cap = kDefaultCap);

// Enumerates every homomorphism rule over the given memory, decides
// injectivity and surjectivity exactly (finite universes by enumeration, Z
// through the de Bruijn oracle), and tallies the surjunctivity implication.
// An injective-but-not-surjective rule is flagged with replayable evidence.
struct SweepReport {
  uint64_t rules = 0;
  uint64_t injective = 0;
  uint64_t surjective_among_injective = 0;
  uint64_t violations = 0;
  uint64_t candidates = 0;  // endomorphism tuples examined
  std::vector<Json> flagged;

  Json to_json() const;
};

// budget bounds the number of candidate tuples; exceeding it raises
// BudgetExceeded carrying the partial report. UnsupportedUniverse for
// universes without an exact surjectivity oracle (only finite ones and Z
// qualify).
SweepReport surjunctivity_sweep(const GroupPtr& G, const AlphabetPtr& A,
                                const FiniteSubset& M, uint64_t budget,
                                uint64_t cap = kDefaultCap);

// Checks sigma composed with tau is the identity at the rule level
// (PreconditionFailed with a distinguishing pattern otherwise), then reports
// whether the reverse composite is also the identity: CertifiedYes, or
// CertifiedNo with the lexicographically least pattern separating it from
// the identity.
Verdict direct_finiteness_check(const CellularAutomaton& sigma,
                                const CellularAutomaton& tau,
                                uint64_t cap = kDefaultCap);

// nullopt when injective / surjective; otherwise a replayable witness
// (kernel element or colliding pair; orphan pattern). Finite universes only.
std::optional<Json> finite_injectivity_witness(const CellularAutomaton& ca,
                                               uint64_t cap = kDefaultCap,
                                               uint64_t budget = kDefaultSearchBudget);
std::optional<Json> finite_surjectivity_witness(const CellularAutomaton& ca,
                                                uint64_t cap = kDefaultCap);

// Lexicographically least nonzero pattern with support in ball(r) that the
// automaton sends to the neutral configuration, or nullopt if none exists.
// Group/linear rules only.
std::optional<Pattern> supported_kernel_witness(const CellularAutomaton& ca, uint32_t r,
                                                uint64_t budget = kDefaultSearchBudget);

// Image over E of the configuration equal to w on its window and neutral
// elsewhere. Group-like alphabets only.
std::vector<uint32_t> evaluate_padded(const CellularAutomaton& ca, const Pattern& w,
                                      const FiniteSubset& E);

// Lexicographically least pattern where the rule differs from projection to
// the identity site; nullopt exactly when the automaton is the identity.
std::optional<Pattern> noncentral_witness(const LocalRule& rule,
                                          uint64_t cap = kDefaultCap);

}  // namespace gca
