#include "gca/alphabet.hpp"

#include <algorithm>
#include <random>

#include "gca/error.hpp"

namespace gca {

AlphabetPtr Alphabet::plain(uint32_t size) {
  if (size == 0) fail("RaggedInput", "empty alphabet");
  auto a = std::shared_ptr<Alphabet>(new Alphabet());
  a->kind_ = AlphabetKind::PlainSet;
  a->size_ = size;
  return a;
}

AlphabetPtr Alphabet::finite_group(std::vector<std::vector<uint32_t>> table) {
  auto g = GroupUniverse::finite(std::move(table));  // reuse axiom validation
  return from_group(g);
}

AlphabetPtr Alphabet::from_group(const GroupPtr& u) {
  if (u->kind() != GroupKind::Finite)
    fail("UnsupportedUniverse", "group alphabets must be finite");
  auto a = std::shared_ptr<Alphabet>(new Alphabet());
  a->kind_ = AlphabetKind::FiniteGroup;
  a->size_ = uint32_t(u->order());
  a->mul_ = u->table();
  a->inv_.resize(a->size_);
  for (uint32_t i = 0; i < a->size_; ++i)
    a->inv_[i] = uint32_t(u->inv(u->element_of_index(i)).w[0]);
  a->id_ = u->identity_index();
  return a;
}

AlphabetPtr Alphabet::vector_space(uint32_t p, uint32_t dim) {
  if (!is_prime(p)) fail("NotPrime", std::to_string(p) + " is not prime");
  if (dim == 0) fail("RaggedInput", "zero-dimensional alphabet");
  uint64_t size = 1;
  for (uint32_t i = 0; i < dim; ++i) {
    size *= p;
    if (size > kDefaultCap) fail("CapExceeded", "alphabet larger than cap");
  }
  auto a = std::shared_ptr<Alphabet>(new Alphabet());
  a->kind_ = AlphabetKind::VectorSpace;
  a->size_ = uint32_t(size);
  a->p_ = p;
  a->dim_ = dim;
  return a;
}

uint32_t Alphabet::neutral() const {
  switch (kind_) {
    case AlphabetKind::FiniteGroup: return id_;
    case AlphabetKind::VectorSpace: return 0;
    case AlphabetKind::PlainSet: fail("NotAGroupAlphabet", "plain alphabets have no neutral letter");
  }
  return 0;
}

uint32_t Alphabet::mul(uint32_t a, uint32_t b) const {
  switch (kind_) {
    case AlphabetKind::FiniteGroup: return mul_[a][b];
    case AlphabetKind::VectorSpace: {
      uint32_t out = 0, pw = 1;
      // componentwise sum mod p without decoding: digits from least significant
      uint32_t x = a, y = b;
      for (uint32_t i = 0; i < dim_; ++i) {
        out += ((x + y) % p_) * pw;
        x /= p_;
        y /= p_;
        pw *= p_;
      }
      return out;
    }
    case AlphabetKind::PlainSet: fail("NotAGroupAlphabet", "plain alphabets have no product");
  }
  return 0;
}

uint32_t Alphabet::inv(uint32_t a) const {
  switch (kind_) {
    case AlphabetKind::FiniteGroup: return inv_[a];
    case AlphabetKind::VectorSpace: {
      uint32_t out = 0, pw = 1, x = a;
      for (uint32_t i = 0; i < dim_; ++i) {
        out += ((p_ - x % p_) % p_) * pw;
        x /= p_;
        pw *= p_;
      }
      return out;
    }
    case AlphabetKind::PlainSet: fail("NotAGroupAlphabet", "plain alphabets have no inverses");
  }
  return 0;
}

std::vector<uint32_t> Alphabet::vec_of(uint32_t letter) const {
  if (kind_ != AlphabetKind::VectorSpace) fail("NotAGroupAlphabet", "vector view needs a vector-space alphabet");
  std::vector<uint32_t> v(dim_);
  for (uint32_t i = dim_; i-- > 0;) {
    v[i] = letter % p_;
    letter /= p_;
  }
  return v;
}

uint32_t Alphabet::letter_of(std::span<const uint32_t> v) const {
  if (kind_ != AlphabetKind::VectorSpace) fail("NotAGroupAlphabet", "vector view needs a vector-space alphabet");
  if (v.size() != dim_) fail("RaggedInput", "coefficient vector length mismatch");
  uint32_t out = 0;
  for (uint32_t i = 0; i < dim_; ++i) out = out * p_ + v[i] % p_;
  return out;
}

bool Alphabet::same(const Alphabet& o) const {
  if (kind_ != o.kind_ || size_ != o.size_) return false;
  if (kind_ == AlphabetKind::FiniteGroup) return mul_ == o.mul_;
  if (kind_ == AlphabetKind::VectorSpace) return p_ == o.p_ && dim_ == o.dim_;
  return true;
}

std::string Alphabet::describe() const {
  switch (kind_) {
    case AlphabetKind::PlainSet: return "plain(" + std::to_string(size_) + ")";
    case AlphabetKind::FiniteGroup: return "finite_group(order " + std::to_string(size_) + ")";
    case AlphabetKind::VectorSpace:
      return "vector_space(p=" + std::to_string(p_) + ", n=" + std::to_string(dim_) + ")";
  }
  return "?";
}

uint64_t pattern_count(uint32_t alphabet_size, size_t window_size, uint64_t cap) {
  uint64_t n = 1;
  for (size_t i = 0; i < window_size; ++i) {
    if (n > cap / alphabet_size) fail("WindowTooLarge", "pattern space exceeds cap");
    n *= alphabet_size;
  }
  if (n > cap) fail("WindowTooLarge", "pattern space exceeds cap");
  return n;
}

uint64_t pattern_index(std::span<const uint32_t> letters, uint32_t alphabet_size) {
  uint64_t idx = 0;
  for (uint32_t l : letters) idx = idx * alphabet_size + l;
  return idx;
}

std::vector<uint32_t> pattern_of_index(uint64_t index, uint32_t alphabet_size,
                                       size_t window_size) {
  std::vector<uint32_t> out(window_size);
  for (size_t i = window_size; i-- > 0;) {
    out[i] = uint32_t(index % alphabet_size);
    index /= alphabet_size;
  }
  return out;
}

namespace {

// Canonical memory M' = sort(M ∪ M^-1 ∪ {1}), plus the projection telling
// where each old memory element landed.
struct Canonicalized {
  FiniteSubset memory;
  std::vector<size_t> old_pos;  // for each canonical element: index in old order, or npos
  static constexpr size_t npos = size_t(-1);
};

Canonicalized canonicalize_memory(const FiniteSubset& M) {
  std::vector<GroupElement> all = M.elems;
  all.push_back(M.G->identity());
  for (const auto& e : M.elems) all.push_back(M.G->inv(e));
  Canonicalized c{FiniteSubset::of(M.G, std::move(all)), {}};
  c.old_pos.assign(c.memory.size(), Canonicalized::npos);
  for (size_t i = 0; i < c.memory.size(); ++i) {
    auto it = std::find(M.elems.begin(), M.elems.end(), c.memory.elems[i]);
    if (it != M.elems.end()) c.old_pos[i] = size_t(it - M.elems.begin());
  }
  return c;
}

void check_letters(const AlphabetPtr& A, std::span<const uint32_t> xs) {
  for (uint32_t x : xs)
    if (x >= A->size()) fail("RaggedInput", "letter out of range");
}

}  // namespace

uint32_t LocalRule::eval(std::span<const uint32_t> pattern) const {
  switch (body) {
    case RuleBody::Table:
      return table[pattern_index(pattern, alphabet->size())];
    case RuleBody::Hom: {
      uint32_t acc = alphabet->neutral();
      for (size_t i = 0; i < pattern.size(); ++i)
        acc = alphabet->mul(acc, endos[i][pattern[i]]);
      return acc;
    }
    case RuleBody::Linear: {
      const uint32_t p = alphabet->p(), d = alphabet->dim();
      std::vector<uint32_t> acc(d, 0);
      for (size_t i = 0; i < pattern.size(); ++i) {
        if (mats[i].is_zero()) continue;
        auto v = alphabet->vec_of(pattern[i]);
        for (uint32_t r = 0; r < d; ++r) {
          uint64_t s = acc[r];
          for (uint32_t c = 0; c < d; ++c) s += uint64_t(mats[i].at(r, c)) * v[c];
          acc[r] = uint32_t(s % p);
        }
      }
      return alphabet->letter_of(acc);
    }
  }
  return 0;
}

LocalRule make_table_rule(AlphabetPtr A, const FiniteSubset& M,
                          std::vector<uint32_t> table, uint64_t cap) {
  uint64_t want = pattern_count(A->size(), M.size(), cap);
  if (table.size() != want) fail("RaggedInput", "table size must be |A|^|M|");
  check_letters(A, table);
  auto c = canonicalize_memory(M);
  LocalRule r;
  r.alphabet = std::move(A);
  r.body = RuleBody::Table;
  if (c.memory.elems == M.elems) {
    r.memory = c.memory;
    r.table = std::move(table);
    return r;
  }
  uint64_t n = pattern_count(r.alphabet->size(), c.memory.size(), cap);
  r.memory = c.memory;
  r.table.resize(n);
  std::vector<uint32_t> small(M.size());
  for (uint64_t idx = 0; idx < n; ++idx) {
    auto big = pattern_of_index(idx, r.alphabet->size(), c.memory.size());
    for (size_t i = 0; i < c.memory.size(); ++i)
      if (c.old_pos[i] != Canonicalized::npos) small[c.old_pos[i]] = big[i];
    r.table[idx] = table[pattern_index(small, r.alphabet->size())];
  }
  return r;
}

LocalRule make_linear_rule(AlphabetPtr A, const FiniteSubset& M, std::vector<FpMat> mats) {
  if (A->kind() != AlphabetKind::VectorSpace)
    fail("NotAGroupAlphabet", "linear rules need a vector-space alphabet");
  if (mats.size() != M.size()) fail("RaggedInput", "one matrix per memory element");
  for (const auto& m : mats)
    if (m.rows() != A->dim() || m.cols() != A->dim() || m.p() != A->p())
      fail("RaggedInput", "matrix shape or prime mismatch");
  auto c = canonicalize_memory(M);
  LocalRule r;
  r.alphabet = std::move(A);
  r.body = RuleBody::Linear;
  r.memory = c.memory;
  r.mats.reserve(c.memory.size());
  for (size_t i = 0; i < c.memory.size(); ++i)
    r.mats.push_back(c.old_pos[i] != Canonicalized::npos
                         ? mats[c.old_pos[i]]
                         : FpMat(r.alphabet->p(), r.alphabet->dim(), r.alphabet->dim()));
  return r;
}

HomValidation validate_hom_rule(AlphabetPtr A, const FiniteSubset& M,
                                std::vector<std::vector<uint32_t>> endos) {
  if (A->kind() != AlphabetKind::FiniteGroup)
    fail("NotAGroupAlphabet", "hom rules need a finite-group alphabet");
  if (endos.size() != M.size()) fail("RaggedInput", "one endomorphism per memory element");
  for (auto& e : endos) {
    if (e.size() != A->size()) fail("RaggedInput", "endomorphism table size mismatch");
    check_letters(A, e);
  }
  HomValidation out;
  const uint32_t q = A->size();
  for (size_t g = 0; g < endos.size(); ++g)
    for (uint32_t a = 0; a < q; ++a)
      for (uint32_t b = 0; b < q; ++b)
        if (endos[g][A->mul(a, b)] != A->mul(endos[g][a], endos[g][b])) {
          out.reason = "not_endomorphism";
          out.site_g = M.elems[g];
          out.witness_a = a;
          out.witness_b = b;
          return out;
        }
  for (size_t g = 0; g < endos.size(); ++g)
    for (size_t h = g + 1; h < endos.size(); ++h)
      for (uint32_t a = 0; a < q; ++a)
        for (uint32_t b = 0; b < q; ++b)
          if (A->mul(endos[g][a], endos[h][b]) != A->mul(endos[h][b], endos[g][a])) {
            out.reason = "images_do_not_commute";
            out.site_g = M.elems[g];
            out.site_h = M.elems[h];
            out.witness_a = a;
            out.witness_b = b;
            return out;
          }
  auto c = canonicalize_memory(M);
  LocalRule r;
  r.alphabet = A;
  r.body = RuleBody::Hom;
  r.memory = c.memory;
  std::vector<uint32_t> trivial(q, A->neutral());
  for (size_t i = 0; i < c.memory.size(); ++i)
    r.endos.push_back(c.old_pos[i] != Canonicalized::npos ? endos[c.old_pos[i]] : trivial);
  out.rule = std::move(r);
  return out;
}

LocalRule make_hom_rule(AlphabetPtr A, const FiniteSubset& M,
                        std::vector<std::vector<uint32_t>> endos) {
  auto v = validate_hom_rule(std::move(A), M, std::move(endos));
  if (!v.rule) fail("RaggedInput", "hom rule rejected: " + v.reason);
  return *v.rule;
}

std::vector<std::vector<uint32_t>> enumerate_endomorphisms(const AlphabetPtr& A,
                                                           uint64_t budget) {
  if (A->kind() != AlphabetKind::FiniteGroup)
    fail("NotAGroupAlphabet", "endomorphisms need a finite-group alphabet");
  const uint32_t q = A->size();
  std::vector<std::vector<uint32_t>> out;
  std::vector<uint32_t> f(q, 0);
  uint64_t steps = 0;
  // assign f(0), f(1), ... in letter order; prune on any violated product
  // identity whose operands and product are all already assigned
  auto consistent_at = [&](uint32_t k) {
    for (uint32_t a = 0; a <= k; ++a)
      for (uint32_t b = 0; b <= k; ++b) {
        uint32_t ab = A->mul(a, b);
        if (ab > k) continue;
        if (f[ab] != A->mul(f[a], f[b])) return false;
      }
    return true;
  };
  uint32_t k = 0;
  f[0] = 0;
  while (true) {
    if (++steps > budget)
      throw Error("BudgetExceeded", "endomorphism enumeration over budget")
          .with_partial(out.size());
    if (f[k] >= q) {
      if (k == 0) break;
      ++f[--k];
      continue;
    }
    if (consistent_at(k)) {
      if (k + 1 == q) {
        out.push_back(f);
        ++f[k];
      } else {
        f[++k] = 0;
      }
    } else {
      ++f[k];
    }
  }
  return out;
}

std::vector<LocalRule> enumerate_hom_rules(const AlphabetPtr& A, const FiniteSubset& M,
                                           uint64_t budget) {
  auto endos = enumerate_endomorphisms(A, budget);
  const size_t k = M.size();
  std::vector<LocalRule> out;
  std::vector<size_t> pick(k, 0);
  uint64_t steps = 0;
  while (true) {
    if (++steps > budget)
      throw Error("BudgetExceeded", "hom rule enumeration over budget")
          .with_partial(out.size());
    std::vector<std::vector<uint32_t>> tuple;
    tuple.reserve(k);
    for (size_t i = 0; i < k; ++i) tuple.push_back(endos[pick[i]]);
    auto v = validate_hom_rule(A, M, std::move(tuple));
    if (v.rule) out.push_back(std::move(*v.rule));
    size_t i = k;
    while (i > 0) {
      if (++pick[i - 1] < endos.size()) break;
      pick[--i] = 0;
    }
    if (i == 0) break;
  }
  return out;
}

LocalRule random_linear_rule(uint32_t p, uint32_t dim, const FiniteSubset& M,
                             uint64_t seed) {
  auto A = Alphabet::vector_space(p, dim);
  std::mt19937_64 rng(seed);
  std::vector<FpMat> mats;
  mats.reserve(M.size());
  for (size_t i = 0; i < M.size(); ++i) {
    FpMat m(p, dim, dim);
    for (uint32_t r = 0; r < dim; ++r)
      for (uint32_t c = 0; c < dim; ++c) m.set(r, c, uint32_t(rng() % p));
    mats.push_back(std::move(m));
  }
  return make_linear_rule(std::move(A), M, std::move(mats));
}

std::vector<uint32_t> compile_to_table(const LocalRule& rule, uint64_t cap) {
  uint64_t n = pattern_count(rule.alphabet->size(), rule.memory.size(), cap);
  std::vector<uint32_t> t(n);
  std::vector<uint32_t> pat(rule.memory.size(), 0);
  for (uint64_t idx = 0; idx < n; ++idx) {
    t[idx] = rule.eval(pat);
    // odometer increment, least significant (last) coordinate first
    for (size_t i = pat.size(); i-- > 0;) {
      if (++pat[i] < rule.alphabet->size()) break;
      pat[i] = 0;
    }
  }
  return t;
}

LocalRule extend_rule(const LocalRule& rule, const FiniteSubset& bigger, uint64_t cap) {
  for (const auto& e : rule.memory.elems)
    if (!bigger.contains(e)) fail("RaggedInput", "extension window must contain the memory");
  LocalRule r;
  r.alphabet = rule.alphabet;
  r.memory = bigger;
  r.body = rule.body;
  switch (rule.body) {
    case RuleBody::Linear: {
      FpMat z(rule.alphabet->p(), rule.alphabet->dim(), rule.alphabet->dim());
      for (const auto& e : bigger.elems) {
        auto i = rule.memory.index_of(e);
        r.mats.push_back(i ? rule.mats[*i] : z);
      }
      return r;
    }
    case RuleBody::Hom: {
      std::vector<uint32_t> trivial(rule.alphabet->size(), rule.alphabet->neutral());
      for (const auto& e : bigger.elems) {
        auto i = rule.memory.index_of(e);
        r.endos.push_back(i ? rule.endos[*i] : trivial);
      }
      return r;
    }
    case RuleBody::Table: {
      uint64_t n = pattern_count(rule.alphabet->size(), bigger.size(), cap);
      std::vector<size_t> proj(bigger.size(), size_t(-1));
      for (size_t i = 0; i < bigger.size(); ++i) {
        auto j = rule.memory.index_of(bigger.elems[i]);
        if (j) proj[i] = *j;
      }
      r.table.resize(n);
      std::vector<uint32_t> big(bigger.size(), 0), small(rule.memory.size(), 0);
      for (uint64_t idx = 0; idx < n; ++idx) {
        for (size_t i = 0; i < bigger.size(); ++i)
          if (proj[i] != size_t(-1)) small[proj[i]] = big[i];
        r.table[idx] = rule.table[pattern_index(small, rule.alphabet->size())];
        for (size_t i = big.size(); i-- > 0;) {
          if (++big[i] < rule.alphabet->size()) break;
          big[i] = 0;
        }
      }
      return r;
    }
  }
  return r;
}

bool rules_equivalent(const LocalRule& a, const LocalRule& b, uint64_t cap) {
  if (!a.alphabet->same(*b.alphabet)) return false;
  FiniteSubset window = union_set(a.memory, b.memory);
  LocalRule ea = extend_rule(a, window, cap);
  LocalRule eb = extend_rule(b, window, cap);
  if (ea.body == eb.body) {
    switch (ea.body) {
      case RuleBody::Linear: return ea.mats == eb.mats;
      case RuleBody::Hom: return ea.endos == eb.endos;
      case RuleBody::Table: return ea.table == eb.table;
    }
  }
  uint64_t n = pattern_count(a.alphabet->size(), window.size(), cap);
  std::vector<uint32_t> pat(window.size(), 0);
  for (uint64_t idx = 0; idx < n; ++idx) {
    if (ea.eval(pat) != eb.eval(pat)) return false;
    for (size_t i = pat.size(); i-- > 0;) {
      if (++pat[i] < a.alphabet->size()) break;
      pat[i] = 0;
    }
  }
  return true;
}

}  // namespace gca
