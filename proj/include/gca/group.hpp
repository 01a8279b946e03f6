#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gca {

enum class GroupKind { Finite, FreeAbelian, Free };

// One element, encoded per universe kind:
//   Finite      w = {index}
//   FreeAbelian w = coordinate vector (length = rank)
//   Free        w = reduced word; letter +i means generator i-1, -i its inverse
struct GroupElement {
  std::vector<int64_t> w;
  bool operator==(const GroupElement&) const = default;
};

class GroupUniverse;
using GroupPtr = std::shared_ptr<const GroupUniverse>;

class GroupUniverse {
 public:
  // Finite universes are given by a full multiplication table over element
  // indices; construction checks the group axioms and derives identity and
  // inverse tables.
  static GroupPtr finite(std::vector<std::vector<uint32_t>> table);
  // Same, but trusts the caller on associativity; identity and inverses are
  // still derived and checked. For tables produced by construction.
  static GroupPtr finite_unchecked(std::vector<std::vector<uint32_t>> table);
  static GroupPtr cyclic(uint32_t n);
  static GroupPtr dihedral(uint32_t n);   // order 2n, n >= 1
  static GroupPtr symmetric(uint32_t n);  // order n!, n <= 6
  static GroupPtr direct_product(const GroupPtr& a, const GroupPtr& b);
  static GroupPtr free_abelian(uint32_t rank);
  static GroupPtr free_group(uint32_t rank);

  GroupKind kind() const { return kind_; }
  uint32_t rank() const { return rank_; }          // FreeAbelian/Free
  size_t order() const { return table_.size(); }   // Finite only
  const std::vector<std::vector<uint32_t>>& table() const { return table_; }
  uint32_t identity_index() const { return id_; }

  GroupElement identity() const;
  GroupElement mul(const GroupElement& a, const GroupElement& b) const;
  GroupElement inv(const GroupElement& a) const;
  bool is_identity(const GroupElement& a) const;
  GroupElement element_of_index(uint32_t i) const;  // Finite

  // Word norm against the standard generating set: all non-identity elements
  // for Finite, +-coordinate vectors for FreeAbelian, free generators for Free.
  uint32_t word_norm(const GroupElement& a) const;

  // Canonical total order: index order (Finite), lexicographic (FreeAbelian),
  // length then lexicographic on symbol ranks (Free).
  bool less(const GroupElement& a, const GroupElement& b) const;

  std::vector<GroupElement> generators() const;

  bool same(const GroupUniverse& o) const;
  std::string describe() const;

 private:
  GroupUniverse() = default;
  void validate_finite(bool check_assoc);

  GroupKind kind_ = GroupKind::Finite;
  uint32_t rank_ = 0;
  std::vector<std::vector<uint32_t>> table_;
  std::vector<uint32_t> inv_;
  uint32_t id_ = 0;
};

// Finite subset with canonical ordering; the workhorse for memories, windows
// and pattern supports. Elements are kept sorted and unique.
struct FiniteSubset {
  GroupPtr G;
  std::vector<GroupElement> elems;

  static FiniteSubset of(GroupPtr G, std::vector<GroupElement> elems);
  size_t size() const { return elems.size(); }
  std::optional<size_t> index_of(const GroupElement& e) const;
  bool contains(const GroupElement& e) const { return index_of(e).has_value(); }
  bool operator==(const FiniteSubset& o) const { return elems == o.elems; }
};

FiniteSubset ball(const GroupPtr& G, uint32_t r);
FiniteSubset product_set(const FiniteSubset& E, const FiniteSubset& F);
FiniteSubset inverse_set(const FiniteSubset& E);
FiniteSubset union_set(const FiniteSubset& E, const FiniteSubset& F);
// Smallest r with E contained in ball(r).
uint32_t covering_radius(const FiniteSubset& E);

// Subgroup generated by a finite set, with an embedding back into the parent.
// Finite parents yield Finite subgroups (closure); FreeAbelian parents yield
// the spanned lattice as a FreeAbelian universe of the lattice rank, embedded
// through a Hermite-normal-form basis. Free parents are rejected.
struct SubgroupEmbedding {
  GroupPtr parent;
  GroupPtr sub;
  std::vector<uint32_t> finite_map;             // Finite: parent index per sub index
  std::vector<std::vector<int64_t>> basis;      // FreeAbelian: HNF rows (rank x d)

  GroupElement embed(const GroupElement& e) const;
  std::optional<GroupElement> preimage(const GroupElement& e) const;
  // Index of the subgroup in the parent when finite (Finite kind, or a
  // full-rank lattice); nullopt otherwise.
  std::optional<uint64_t> subgroup_index() const;
};

SubgroupEmbedding subgroup_generated(const GroupPtr& G, const FiniteSubset& S);

std::vector<GroupElement> enumerate_group(const GroupPtr& G);

// Row-style Hermite normal form: nonzero rows, increasing pivot columns,
// positive pivots, entries above each pivot reduced into [0, pivot).
std::vector<std::vector<int64_t>> hermite_normal_form(
    std::vector<std::vector<int64_t>> rows);

}  // namespace gca
