#include "gca/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "gca/error.hpp"

namespace gca {

namespace {

// Rank of a free-group symbol for the canonical order: a < a^-1 < b < b^-1 ...
uint64_t free_symbol_rank(int64_t s) {
  return s > 0 ? 2 * uint64_t(s - 1) : 2 * uint64_t(-s - 1) + 1;
}

}  // namespace

void GroupUniverse::validate_finite(bool check_assoc) {
  const size_t n = table_.size();
  if (n == 0) fail("RaggedInput", "empty multiplication table");
  for (const auto& row : table_) {
    if (row.size() != n) fail("RaggedInput", "multiplication table is not square");
    for (uint32_t v : row)
      if (v >= n) fail("RaggedInput", "table entry out of range");
  }
  // identity: unique two-sided neutral element
  std::optional<uint32_t> id;
  for (uint32_t e = 0; e < n; ++e) {
    bool ok = true;
    for (uint32_t x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
    if (ok) {
      if (id) fail("RaggedInput", "multiple identity elements");
      id = e;
    }
  }
  if (!id) fail("RaggedInput", "no identity element");
  id_ = *id;
  inv_.assign(n, 0);
  for (uint32_t x = 0; x < n; ++x) {
    std::optional<uint32_t> ix;
    for (uint32_t y = 0; y < n; ++y)
      if (table_[x][y] == id_ && table_[y][x] == id_) {
        if (ix) fail("RaggedInput", "element with two inverses");
        ix = y;
      }
    if (!ix) fail("RaggedInput", "element without inverse");
    inv_[x] = *ix;
  }
  if (!check_assoc) return;
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b)
      for (uint32_t c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          fail("RaggedInput", "multiplication table is not associative");
}

GroupPtr GroupUniverse::finite(std::vector<std::vector<uint32_t>> table) {
  auto g = std::shared_ptr<GroupUniverse>(new GroupUniverse());
  g->kind_ = GroupKind::Finite;
  g->table_ = std::move(table);
  g->validate_finite(true);
  return g;
}

GroupPtr GroupUniverse::finite_unchecked(std::vector<std::vector<uint32_t>> table) {
  auto g = std::shared_ptr<GroupUniverse>(new GroupUniverse());
  g->kind_ = GroupKind::Finite;
  g->table_ = std::move(table);
  g->validate_finite(false);
  return g;
}

GroupPtr GroupUniverse::cyclic(uint32_t n) {
  if (n == 0) fail("RaggedInput", "cyclic(0)");
  std::vector<std::vector<uint32_t>> t(n, std::vector<uint32_t>(n));
  for (uint32_t a = 0; a < n; ++a)
    for (uint32_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return finite(std::move(t));
}

GroupPtr GroupUniverse::dihedral(uint32_t n) {
  if (n == 0) fail("RaggedInput", "dihedral(0)");
  // element i + n*j = r^i s^j with s r s = r^-1
  const uint32_t m = 2 * n;
  std::vector<std::vector<uint32_t>> t(m, std::vector<uint32_t>(m));
  for (uint32_t x = 0; x < m; ++x)
    for (uint32_t y = 0; y < m; ++y) {
      uint32_t i1 = x % n, j1 = x / n, i2 = y % n, j2 = y / n;
      uint32_t i = j1 == 0 ? (i1 + i2) % n : (i1 + n - i2 % n) % n;
      t[x][y] = i + n * (j1 ^ j2);
    }
  return finite(std::move(t));
}

GroupPtr GroupUniverse::symmetric(uint32_t n) {
  if (n == 0 || n > 6) fail("RaggedInput", "symmetric(n) needs 1 <= n <= 6");
  std::vector<std::vector<uint32_t>> perms;
  std::vector<uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  auto index_of = [&](const std::vector<uint32_t>& q) {
    return uint32_t(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
  };
  const uint32_t m = uint32_t(perms.size());
  std::vector<std::vector<uint32_t>> t(m, std::vector<uint32_t>(m));
  for (uint32_t a = 0; a < m; ++a)
    for (uint32_t b = 0; b < m; ++b) {
      std::vector<uint32_t> c(n);
      for (uint32_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];  // a after b
      t[a][b] = index_of(c);
    }
  return finite(std::move(t));
}

GroupPtr GroupUniverse::direct_product(const GroupPtr& a, const GroupPtr& b) {
  if (a->kind() != GroupKind::Finite || b->kind() != GroupKind::Finite)
    fail("UnsupportedUniverse", "direct_product needs finite operands");
  const uint32_t na = uint32_t(a->order()), nb = uint32_t(b->order());
  std::vector<std::vector<uint32_t>> t(size_t(na) * nb, std::vector<uint32_t>(size_t(na) * nb));
  for (uint32_t x = 0; x < na * nb; ++x)
    for (uint32_t y = 0; y < na * nb; ++y)
      t[x][y] = a->table()[x / nb][y / nb] * nb + b->table()[x % nb][y % nb];
  return finite(std::move(t));
}

GroupPtr GroupUniverse::free_abelian(uint32_t rank) {
  auto g = std::shared_ptr<GroupUniverse>(new GroupUniverse());
  g->kind_ = GroupKind::FreeAbelian;
  g->rank_ = rank;
  return g;
}

GroupPtr GroupUniverse::free_group(uint32_t rank) {
  if (rank == 0) fail("RaggedInput", "free_group(0)");
  auto g = std::shared_ptr<GroupUniverse>(new GroupUniverse());
  g->kind_ = GroupKind::Free;
  g->rank_ = rank;
  return g;
}

GroupElement GroupUniverse::identity() const {
  switch (kind_) {
    case GroupKind::Finite: return {{int64_t(id_)}};
    case GroupKind::FreeAbelian: return {std::vector<int64_t>(rank_, 0)};
    case GroupKind::Free: return {{}};
  }
  return {};
}

GroupElement GroupUniverse::mul(const GroupElement& a, const GroupElement& b) const {
  switch (kind_) {
    case GroupKind::Finite:
      return {{int64_t(table_[size_t(a.w[0])][size_t(b.w[0])])}};
    case GroupKind::FreeAbelian: {
      GroupElement r = a;
      for (uint32_t i = 0; i < rank_; ++i) r.w[i] += b.w[i];
      return r;
    }
    case GroupKind::Free: {
      GroupElement r = a;
      for (int64_t s : b.w) {
        if (!r.w.empty() && r.w.back() == -s)
          r.w.pop_back();
        else
          r.w.push_back(s);
      }
      return r;
    }
  }
  return {};
}

GroupElement GroupUniverse::inv(const GroupElement& a) const {
  switch (kind_) {
    case GroupKind::Finite: return {{int64_t(inv_[size_t(a.w[0])])}};
    case GroupKind::FreeAbelian: {
      GroupElement r = a;
      for (auto& x : r.w) x = -x;
      return r;
    }
    case GroupKind::Free: {
      GroupElement r;
      r.w.reserve(a.w.size());
      for (auto it = a.w.rbegin(); it != a.w.rend(); ++it) r.w.push_back(-*it);
      return r;
    }
  }
  return {};
}

bool GroupUniverse::is_identity(const GroupElement& a) const {
  return a == identity();
}

GroupElement GroupUniverse::element_of_index(uint32_t i) const {
  if (kind_ != GroupKind::Finite || i >= order()) fail("RaggedInput", "bad finite element index");
  return {{int64_t(i)}};
}

uint32_t GroupUniverse::word_norm(const GroupElement& a) const {
  switch (kind_) {
    case GroupKind::Finite: return is_identity(a) ? 0 : 1;
    case GroupKind::FreeAbelian: {
      uint64_t s = 0;
      for (int64_t x : a.w) s += uint64_t(x < 0 ? -x : x);
      return uint32_t(s);
    }
    case GroupKind::Free: return uint32_t(a.w.size());
  }
  return 0;
}

bool GroupUniverse::less(const GroupElement& a, const GroupElement& b) const {
  switch (kind_) {
    case GroupKind::Finite:
    case GroupKind::FreeAbelian:
      return a.w < b.w;
    case GroupKind::Free: {
      if (a.w.size() != b.w.size()) return a.w.size() < b.w.size();
      for (size_t i = 0; i < a.w.size(); ++i)
        if (a.w[i] != b.w[i]) return free_symbol_rank(a.w[i]) < free_symbol_rank(b.w[i]);
      return false;
    }
  }
  return false;
}

std::vector<GroupElement> GroupUniverse::generators() const {
  std::vector<GroupElement> gs;
  switch (kind_) {
    case GroupKind::Finite:
      for (uint32_t i = 0; i < order(); ++i)
        if (i != id_) gs.push_back({{int64_t(i)}});
      break;
    case GroupKind::FreeAbelian:
      for (uint32_t i = 0; i < rank_; ++i) {
        GroupElement e{std::vector<int64_t>(rank_, 0)};
        e.w[i] = 1;
        gs.push_back(e);
        e.w[i] = -1;
        gs.push_back(e);
      }
      break;
    case GroupKind::Free:
      for (uint32_t i = 0; i < rank_; ++i) {
        gs.push_back({{int64_t(i) + 1}});
        gs.push_back({{-(int64_t(i) + 1)}});
      }
      break;
  }
  return gs;
}

bool GroupUniverse::same(const GroupUniverse& o) const {
  if (kind_ != o.kind_) return false;
  if (kind_ == GroupKind::Finite) return table_ == o.table_;
  return rank_ == o.rank_;
}

std::string GroupUniverse::describe() const {
  switch (kind_) {
    case GroupKind::Finite: return "finite(order " + std::to_string(order()) + ")";
    case GroupKind::FreeAbelian: return "free_abelian(" + std::to_string(rank_) + ")";
    case GroupKind::Free: return "free(" + std::to_string(rank_) + ")";
  }
  return "?";
}

FiniteSubset FiniteSubset::of(GroupPtr G, std::vector<GroupElement> elems) {
  std::sort(elems.begin(), elems.end(),
            [&](const GroupElement& a, const GroupElement& b) { return G->less(a, b); });
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return {std::move(G), std::move(elems)};
}

std::optional<size_t> FiniteSubset::index_of(const GroupElement& e) const {
  auto it = std::lower_bound(elems.begin(), elems.end(), e,
                             [&](const GroupElement& a, const GroupElement& b) {
                               return G->less(a, b);
                             });
  if (it != elems.end() && *it == e) return size_t(it - elems.begin());
  return std::nullopt;
}

FiniteSubset ball(const GroupPtr& G, uint32_t r) {
  auto cmp = [&](const GroupElement& a, const GroupElement& b) { return G->less(a, b); };
  std::set<GroupElement, decltype(cmp)> seen(cmp);
  std::vector<GroupElement> frontier{G->identity()};
  seen.insert(G->identity());
  auto gens = G->generators();
  for (uint32_t step = 0; step < r; ++step) {
    std::vector<GroupElement> next;
    for (const auto& e : frontier)
      for (const auto& g : gens) {
        GroupElement x = G->mul(e, g);
        if (seen.insert(x).second) next.push_back(x);
      }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return FiniteSubset::of(G, {seen.begin(), seen.end()});
}

FiniteSubset product_set(const FiniteSubset& E, const FiniteSubset& F) {
  if (!E.G->same(*F.G)) fail("DomainMismatch", "product_set over different universes");
  std::vector<GroupElement> out;
  out.reserve(E.size() * F.size());
  for (const auto& a : E.elems)
    for (const auto& b : F.elems) out.push_back(E.G->mul(a, b));
  return FiniteSubset::of(E.G, std::move(out));
}

FiniteSubset inverse_set(const FiniteSubset& E) {
  std::vector<GroupElement> out;
  out.reserve(E.size());
  for (const auto& a : E.elems) out.push_back(E.G->inv(a));
  return FiniteSubset::of(E.G, std::move(out));
}

FiniteSubset union_set(const FiniteSubset& E, const FiniteSubset& F) {
  if (!E.G->same(*F.G)) fail("DomainMismatch", "union_set over different universes");
  std::vector<GroupElement> out = E.elems;
  out.insert(out.end(), F.elems.begin(), F.elems.end());
  return FiniteSubset::of(E.G, std::move(out));
}

uint32_t covering_radius(const FiniteSubset& E) {
  uint32_t r = 0;
  for (const auto& e : E.elems) r = std::max(r, E.G->word_norm(e));
  return r;
}

std::vector<std::vector<int64_t>> hermite_normal_form(
    std::vector<std::vector<int64_t>> rows) {
  if (rows.empty()) return rows;
  const size_t d = rows[0].size();
  for (const auto& r : rows)
    if (r.size() != d) fail("RaggedInput", "ragged lattice rows");
  size_t top = 0;
  for (size_t col = 0; col < d && top < rows.size(); ++col) {
    // gcd elimination in this column, below `top`
    while (true) {
      size_t best = rows.size();
      for (size_t i = top; i < rows.size(); ++i)
        if (rows[i][col] != 0 &&
            (best == rows.size() ||
             std::abs(rows[i][col]) < std::abs(rows[best][col])))
          best = i;
      if (best == rows.size()) break;  // column clear below top
      std::swap(rows[top], rows[best]);
      bool progressed = false;
      for (size_t i = top + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        int64_t q = rows[i][col] / rows[top][col];
        for (size_t j = 0; j < d; ++j) rows[i][j] -= q * rows[top][j];
        if (rows[i][col] != 0) progressed = true;  // remainder left, loop again
      }
      if (!progressed) break;
    }
    if (rows[top][col] == 0) continue;
    if (rows[top][col] < 0)
      for (size_t j = 0; j < d; ++j) rows[top][j] = -rows[top][j];
    // reduce entries above the pivot into [0, pivot)
    for (size_t i = 0; i < top; ++i) {
      int64_t q = rows[i][col] / rows[top][col];
      if (rows[i][col] % rows[top][col] < 0) q -= 1;
      if (q != 0)
        for (size_t j = 0; j < d; ++j) rows[i][j] -= q * rows[top][j];
    }
    ++top;
  }
  rows.resize(top);
  return rows;
}

GroupElement SubgroupEmbedding::embed(const GroupElement& e) const {
  if (sub->kind() == GroupKind::Finite) return parent->element_of_index(finite_map[size_t(e.w[0])]);
  // FreeAbelian: coordinates against the HNF basis rows
  std::vector<int64_t> v(parent->rank(), 0);
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) v[j] += e.w[i] * basis[i][j];
  return {std::move(v)};
}

std::optional<GroupElement> SubgroupEmbedding::preimage(const GroupElement& e) const {
  if (sub->kind() == GroupKind::Finite) {
    auto it = std::lower_bound(finite_map.begin(), finite_map.end(), uint32_t(e.w[0]));
    if (it == finite_map.end() || *it != uint32_t(e.w[0])) return std::nullopt;
    return GroupElement{{int64_t(it - finite_map.begin())}};
  }
  // back-substitution along increasing pivot columns of the HNF basis
  std::vector<int64_t> v = e.w;
  std::vector<int64_t> x(basis.size(), 0);
  for (size_t i = 0; i < basis.size(); ++i) {
    size_t piv = 0;
    while (piv < v.size() && basis[i][piv] == 0) ++piv;
    if (piv == v.size()) return std::nullopt;
    if (v[piv] % basis[i][piv] != 0) return std::nullopt;
    x[i] = v[piv] / basis[i][piv];
    for (size_t j = 0; j < v.size(); ++j) v[j] -= x[i] * basis[i][j];
  }
  for (int64_t r : v)
    if (r != 0) return std::nullopt;
  return GroupElement{std::move(x)};
}

std::optional<uint64_t> SubgroupEmbedding::subgroup_index() const {
  if (sub->kind() == GroupKind::Finite)
    return parent->order() / sub->order();
  if (basis.size() != parent->rank()) return std::nullopt;
  uint64_t det = 1;
  for (size_t i = 0; i < basis.size(); ++i) {
    size_t piv = 0;
    while (basis[i][piv] == 0) ++piv;
    det *= uint64_t(basis[i][piv]);
  }
  return det;
}

SubgroupEmbedding subgroup_generated(const GroupPtr& G, const FiniteSubset& S) {
  if (!G->same(*S.G)) fail("DomainMismatch", "generators from a different universe");
  switch (G->kind()) {
    case GroupKind::Free:
      fail("UnsupportedUniverse", "subgroup_generated is not supported on free universes");
    case GroupKind::Finite: {
      std::vector<bool> in(G->order(), false);
      std::vector<uint32_t> work;
      auto push = [&](uint32_t i) {
        if (!in[i]) {
          in[i] = true;
          work.push_back(i);
        }
      };
      push(G->identity_index());
      for (const auto& e : S.elems) {
        push(uint32_t(e.w[0]));
        push(uint32_t(G->inv(e).w[0]));
      }
      for (size_t grown = 0; grown != work.size();) {
        grown = work.size();
        for (size_t k = 0; k < work.size(); ++k)
          for (size_t l = 0; l < work.size(); ++l) push(G->table()[work[k]][work[l]]);
      }
      std::vector<uint32_t> members;
      for (uint32_t i = 0; i < G->order(); ++i)
        if (in[i]) members.push_back(i);
      std::vector<std::vector<uint32_t>> sub_table(members.size(),
                                                   std::vector<uint32_t>(members.size()));
      auto pos = [&](uint32_t parent_idx) {
        return uint32_t(std::lower_bound(members.begin(), members.end(), parent_idx) -
                        members.begin());
      };
      for (size_t a = 0; a < members.size(); ++a)
        for (size_t b = 0; b < members.size(); ++b)
          sub_table[a][b] = pos(G->table()[members[a]][members[b]]);
      SubgroupEmbedding emb;
      emb.parent = G;
      emb.sub = GroupUniverse::finite(std::move(sub_table));
      emb.finite_map = std::move(members);
      return emb;
    }
    case GroupKind::FreeAbelian: {
      std::vector<std::vector<int64_t>> rows;
      for (const auto& e : S.elems) rows.push_back(e.w);
      auto hnf = hermite_normal_form(std::move(rows));
      SubgroupEmbedding emb;
      emb.parent = G;
      emb.sub = GroupUniverse::free_abelian(uint32_t(hnf.size()));
      emb.basis = std::move(hnf);
      return emb;
    }
  }
  fail("UnsupportedUniverse", "unreachable");
}

std::vector<GroupElement> enumerate_group(const GroupPtr& G) {
  if (G->kind() != GroupKind::Finite)
    fail("InfiniteUniverse", "enumerate_group needs a finite universe");
  std::vector<GroupElement> out;
  out.reserve(G->order());
  for (uint32_t i = 0; i < G->order(); ++i) out.push_back({{int64_t(i)}});
  return out;
}

}  // namespace gca
