#pragma once

#include <optional>
#include <vector>

#include "gca/alphabet.hpp"
#include "gca/group.hpp"

namespace gca {

// A cellular automaton: universe group, state alphabet, local rule over a
// canonical memory set. The global map is tau(c)(g) = rule((g^-1 c)|_M).
struct CellularAutomaton {
  GroupPtr universe;
  AlphabetPtr alphabet;
  LocalRule rule;
};

// Validates that every memory element is a well-formed element of G
// (DomainMismatch otherwise) and that the rule's alphabet is usable.
CellularAutomaton make_ca(GroupPtr G, LocalRule rule);

// Structural class of the local rule, the finest one that verifiably applies:
//   Linear  states form F_p^dim and the rule is F_p-linear
//   Group   states form a finite group and the rule is a product of
//           endomorphisms with commuting images
//   Plain   no verified structure
enum class CAClass { Plain, Group, Linear };
CAClass classify(const CellularAutomaton& ca, uint64_t cap = kDefaultCap);

// Rule converted to a Linear body (vector-space alphabets only) when the
// evaluation is genuinely linear; nullopt otherwise. Table bodies are verified
// against every pattern, which is bounded by `cap`.
std::optional<LocalRule> as_linear_rule(const LocalRule& r, uint64_t cap = kDefaultCap);

// Rule converted to a Hom body when the evaluation is a product of
// endomorphisms with commuting images; nullopt otherwise.
std::optional<LocalRule> as_group_rule(const LocalRule& r, uint64_t cap = kDefaultCap);

// Finitely supported values over a window, in the window's canonical order.
struct Pattern {
  FiniteSubset window;
  std::vector<uint32_t> values;
};

// Restriction of the global map to a finite window E: a map A^{E M} -> A^E.
// positions[i][j] is the source index of target_i * memory_j.
struct WindowMap {
  FiniteSubset source;  // E * M
  FiniteSubset target;  // E
  LocalRule rule;
  std::vector<std::vector<size_t>> positions;
  std::optional<FpMat> matrix;  // Linear rules on request: (dim|E|) x (dim|EM|)

  // values indexed by `source` order -> values indexed by `target` order
  std::vector<uint32_t> apply(const std::vector<uint32_t>& values) const;
};

WindowMap window_map(const CellularAutomaton& ca, const FiniteSubset& E,
                     bool want_matrix = false);

// Matrix of the window evaluation at every site of E, keeping only the
// unknowns on S: entries of E*M outside S read as zero. Rows dim|E|, columns
// dim|S|. Linear rules only (NotLinear).
FpMat linear_window_system(const CellularAutomaton& ca, const FiniteSubset& S,
                           const FiniteSubset& E);

// compose(outer, inner)(c) = outer(inner(c)); memory is the product set.
// Linear pairs compose by block convolution, group pairs by pointwise products
// of composed endomorphisms; anything else goes through a table within `cap`.
CellularAutomaton compose(const CellularAutomaton& outer, const CellularAutomaton& inner,
                          uint64_t cap = kDefaultCap);

CellularAutomaton identity_ca(GroupPtr G, AlphabetPtr A);

// tau(c)(g) = c(g * g0)
CellularAutomaton shift_ca(GroupPtr G, AlphabetPtr A, const GroupElement& g0);

// Equality of the induced global maps, decided on the union of the memories.
bool ca_equal(const CellularAutomaton& a, const CellularAutomaton& b,
              uint64_t cap = kDefaultCap);
bool is_identity_ca(const CellularAutomaton& ca, uint64_t cap = kDefaultCap);

// The automaton induced on the quotient of Z^d by a full-rank sublattice,
// i.e. the action on lattice-periodic configurations. Memory elements that
// collide in the quotient are merged (sums of matrices, products of
// endomorphisms, shared table coordinates).
struct PeriodicAction {
  GroupPtr quotient;                               // Finite universe
  CellularAutomaton induced;
  std::vector<std::vector<int64_t>> lattice_basis; // Hermite normal form rows
  std::vector<GroupElement> coset_reps;            // box reps, quotient index order

  GroupElement project(const GroupElement& g) const;  // Z^d element -> quotient element
};

// Quotient order is hard-capped at 4096 (CapExceeded); the lattice must have
// full rank (RankDeficientLattice).
PeriodicAction periodic_action(const CellularAutomaton& ca,
                               const std::vector<std::vector<int64_t>>& lattice,
                               uint64_t cap = kDefaultCap);

// The same automaton viewed over a subgroup containing the memory, through
// the embedding produced by subgroup_generated. PreconditionFailed when some
// memory element lies outside the subgroup.
CellularAutomaton restrict_to_subgroup(const CellularAutomaton& ca,
                                       const SubgroupEmbedding& emb,
                                       uint64_t cap = kDefaultCap);

}  // namespace gca
