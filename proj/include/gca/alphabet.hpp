#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gca/fp.hpp"
#include "gca/group.hpp"

namespace gca {

inline constexpr uint64_t kDefaultCap = uint64_t(1) << 24;

enum class AlphabetKind { PlainSet, FiniteGroup, VectorSpace };

class Alphabet;
using AlphabetPtr = std::shared_ptr<const Alphabet>;

// Letters are indices 0..|A|-1 everywhere. VectorSpace alphabets additionally
// expose the coefficient-vector view; the index of a vector is its mixed-radix
// encoding base p, most significant coordinate first.
class Alphabet {
 public:
  static AlphabetPtr plain(uint32_t size);
  static AlphabetPtr finite_group(std::vector<std::vector<uint32_t>> table);
  static AlphabetPtr from_group(const GroupPtr& finite_universe);
  static AlphabetPtr vector_space(uint32_t p, uint32_t dim);  // NotPrime on composite p

  AlphabetKind kind() const { return kind_; }
  uint32_t size() const { return size_; }
  bool group_like() const { return kind_ != AlphabetKind::PlainSet; }

  uint32_t neutral() const;
  uint32_t mul(uint32_t a, uint32_t b) const;
  uint32_t inv(uint32_t a) const;

  uint32_t p() const { return p_; }
  uint32_t dim() const { return dim_; }
  std::vector<uint32_t> vec_of(uint32_t letter) const;
  uint32_t letter_of(std::span<const uint32_t> v) const;

  const std::vector<std::vector<uint32_t>>& table() const { return mul_; }
  bool same(const Alphabet& o) const;
  std::string describe() const;

 private:
  Alphabet() = default;
  AlphabetKind kind_ = AlphabetKind::PlainSet;
  uint32_t size_ = 0;
  std::vector<std::vector<uint32_t>> mul_;  // FiniteGroup
  std::vector<uint32_t> inv_;
  uint32_t id_ = 0;
  uint32_t p_ = 0, dim_ = 0;  // VectorSpace
};

// Number of patterns |A|^k with an overflow/cap guard.
uint64_t pattern_count(uint32_t alphabet_size, size_t window_size, uint64_t cap);

// Mixed-radix pattern index, most significant coordinate first (canonical
// window order). Bit-exact contract for tables and serialized patterns.
uint64_t pattern_index(std::span<const uint32_t> letters, uint32_t alphabet_size);
std::vector<uint32_t> pattern_of_index(uint64_t index, uint32_t alphabet_size,
                                       size_t window_size);

enum class RuleBody { Table, Hom, Linear };

// Local rule over a canonical memory (closed under inverses, contains 1_G).
// Construction canonicalizes: added memory elements are ignored by the rule
// (table re-indexing, trivial endomorphisms, zero matrices).
struct LocalRule {
  AlphabetPtr alphabet;
  FiniteSubset memory;
  RuleBody body = RuleBody::Table;
  std::vector<uint32_t> table;              // Table: |A|^|M| entries
  std::vector<std::vector<uint32_t>> endos; // Hom: per memory element, |A| entries
  std::vector<FpMat> mats;                  // Linear: per memory element, dim x dim

  uint32_t eval(std::span<const uint32_t> pattern) const;  // canonical memory order
};

LocalRule make_table_rule(AlphabetPtr A, const FiniteSubset& M,
                          std::vector<uint32_t> table, uint64_t cap = kDefaultCap);
LocalRule make_linear_rule(AlphabetPtr A, const FiniteSubset& M, std::vector<FpMat> mats);

// Hom rules: one endomorphism per memory element, images pairwise commuting;
// evaluation multiplies φ_g(x(g)) in canonical memory order.
struct HomValidation {
  std::optional<LocalRule> rule;
  // empty when accepted; otherwise names the violated identity with witnesses
  std::string reason;
  GroupElement site_g, site_h;
  uint32_t witness_a = 0, witness_b = 0;
};

HomValidation validate_hom_rule(AlphabetPtr A, const FiniteSubset& M,
                                std::vector<std::vector<uint32_t>> endos);
LocalRule make_hom_rule(AlphabetPtr A, const FiniteSubset& M,
                        std::vector<std::vector<uint32_t>> endos);

// All endomorphisms of a FiniteGroup alphabet, each as a value table,
// deterministic (lexicographic) order. Work is bounded by `budget` steps.
std::vector<std::vector<uint32_t>> enumerate_endomorphisms(const AlphabetPtr& A,
                                                           uint64_t budget);

// Every valid Hom rule with the given memory, deterministic order.
// Throws BudgetExceeded (carrying the partial count) when over budget.
std::vector<LocalRule> enumerate_hom_rules(const AlphabetPtr& A, const FiniteSubset& M,
                                           uint64_t budget = 1u << 22);

LocalRule random_linear_rule(uint32_t p, uint32_t dim, const FiniteSubset& M,
                             uint64_t seed);

// Dense table form of any rule body, within cap.
std::vector<uint32_t> compile_to_table(const LocalRule& rule, uint64_t cap = kDefaultCap);

// Same evaluation on the union of the memories (rules may ignore coordinates).
bool rules_equivalent(const LocalRule& a, const LocalRule& b, uint64_t cap = kDefaultCap);

// Extension of a rule to a larger window that ignores the added coordinates.
LocalRule extend_rule(const LocalRule& rule, const FiniteSubset& bigger,
                      uint64_t cap = kDefaultCap);

}  // namespace gca
