#include "gca/ca.hpp"

#include <algorithm>
#include <utility>

#include "gca/error.hpp"

namespace gca {
namespace {

constexpr uint64_t kMaxQuotientOrder = 4096;

void check_element(const GroupPtr& G, const GroupElement& e) {
  switch (G->kind()) {
    case GroupKind::Finite:
      if (e.w.size() != 1 || e.w[0] < 0 || uint64_t(e.w[0]) >= G->order())
        fail("DomainMismatch", "element is not an index into the finite universe");
      return;
    case GroupKind::FreeAbelian:
      if (e.w.size() != G->rank())
        fail("DomainMismatch", "coordinate vector has the wrong length");
      return;
    case GroupKind::Free:
      for (size_t i = 0; i < e.w.size(); ++i) {
        int64_t x = e.w[i];
        if (x == 0 || uint64_t(x < 0 ? -x : x) > G->rank())
          fail("DomainMismatch", "word letter outside the free generators");
        if (i + 1 < e.w.size() && e.w[i + 1] == -x)
          fail("DomainMismatch", "word is not reduced");
      }
      return;
  }
}

// odometer step in canonical pattern order: most significant coordinate first,
// so the last coordinate moves fastest
bool next_pattern(std::vector<uint32_t>& pat, uint32_t q) {
  for (size_t i = pat.size(); i-- > 0;) {
    if (++pat[i] < q) return true;
    pat[i] = 0;
  }
  return false;
}

std::vector<uint32_t> mat_vec(const FpMat& m, std::span<const uint32_t> v) {
  std::vector<uint32_t> out(m.rows(), 0);
  for (uint32_t r = 0; r < m.rows(); ++r) {
    uint64_t acc = 0;
    for (uint32_t c = 0; c < m.cols(); ++c) acc += uint64_t(m.at(r, c)) * v[c];
    out[r] = uint32_t(acc % m.p());
  }
  return out;
}

int64_t floordiv(int64_t a, int64_t b) {
  int64_t q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

uint64_t checked_pow(uint32_t base, size_t exp, uint64_t limit) {
  uint64_t n = 1;
  for (size_t i = 0; i < exp; ++i) {
    if (n > limit / (base ? base : 1)) return limit + 1;
    n *= base;
  }
  return n;
}

}  // namespace

CellularAutomaton make_ca(GroupPtr G, LocalRule rule) {
  if (!G) fail("DomainMismatch", "null universe");
  if (!rule.alphabet) fail("DomainMismatch", "rule has no alphabet");
  if (!rule.memory.G || !rule.memory.G->same(*G))
    fail("DomainMismatch", "memory was built over a different universe");
  for (const auto& e : rule.memory.elems) check_element(G, e);
  if (!rule.memory.contains(G->identity()))
    fail("DomainMismatch", "memory must contain the identity");
  for (const auto& e : rule.memory.elems)
    if (!rule.memory.contains(G->inv(e)))
      fail("DomainMismatch", "memory must be closed under inverses");

  const uint32_t q = rule.alphabet->size();
  const size_t k = rule.memory.size();
  switch (rule.body) {
    case RuleBody::Table:
      if (rule.table.size() != checked_pow(q, k, uint64_t(-1) / 2))
        fail("DomainMismatch", "table size does not match |A|^|M|");
      for (uint32_t v : rule.table)
        if (v >= q) fail("DomainMismatch", "table value outside the alphabet");
      break;
    case RuleBody::Hom:
      if (rule.endos.size() != k) fail("DomainMismatch", "one endomorphism per memory element");
      for (const auto& f : rule.endos)
        if (f.size() != q) fail("DomainMismatch", "endomorphism table of wrong size");
      break;
    case RuleBody::Linear:
      if (rule.mats.size() != k) fail("DomainMismatch", "one matrix per memory element");
      for (const auto& m : rule.mats)
        if (m.rows() != rule.alphabet->dim() || m.cols() != rule.alphabet->dim() ||
            m.p() != rule.alphabet->p())
          fail("DomainMismatch", "matrix shape does not match the alphabet");
      break;
  }

  CellularAutomaton ca;
  ca.universe = std::move(G);
  ca.alphabet = rule.alphabet;
  ca.rule = std::move(rule);
  return ca;
}

std::optional<LocalRule> as_linear_rule(const LocalRule& r, uint64_t cap) {
  const AlphabetPtr& A = r.alphabet;
  if (A->kind() != AlphabetKind::VectorSpace) return std::nullopt;
  if (r.body == RuleBody::Linear) return r;
  const uint32_t n = A->dim(), p = A->p();
  const size_t k = r.memory.size();

  auto column_from_letter = [&](FpMat& m, uint32_t col, uint32_t letter) {
    auto v = A->vec_of(letter);
    for (uint32_t row = 0; row < n; ++row) m.set(row, col, v[row]);
  };

  if (r.body == RuleBody::Hom) {
    // endomorphisms of (F_p^n, +) are exactly the linear maps
    std::vector<FpMat> mats;
    mats.reserve(k);
    for (size_t j = 0; j < k; ++j) {
      FpMat m(p, n, n);
      for (uint32_t i = 0; i < n; ++i) {
        std::vector<uint32_t> basis(n, 0);
        basis[i] = 1;
        column_from_letter(m, i, r.endos[j][A->letter_of(basis)]);
      }
      mats.push_back(std::move(m));
    }
    return make_linear_rule(A, r.memory, std::move(mats));
  }

  std::vector<uint32_t> pat(k, A->neutral());
  if (r.eval(pat) != A->neutral()) return std::nullopt;
  std::vector<FpMat> mats;
  mats.reserve(k);
  for (size_t j = 0; j < k; ++j) {
    FpMat m(p, n, n);
    for (uint32_t i = 0; i < n; ++i) {
      std::vector<uint32_t> basis(n, 0);
      basis[i] = 1;
      pat[j] = A->letter_of(basis);
      column_from_letter(m, i, r.eval(pat));
      pat[j] = A->neutral();
    }
    mats.push_back(std::move(m));
  }
  LocalRule candidate = make_linear_rule(A, r.memory, std::move(mats));
  if (!rules_equivalent(r, candidate, cap)) return std::nullopt;
  return candidate;
}

std::optional<LocalRule> as_group_rule(const LocalRule& r, uint64_t cap) {
  const AlphabetPtr& A = r.alphabet;
  if (!A->group_like()) return std::nullopt;
  if (r.body == RuleBody::Hom) return r;
  const uint32_t q = A->size();
  const size_t k = r.memory.size();

  if (r.body == RuleBody::Linear) {
    // x -> Mx is an endomorphism of the additive group; images commute
    std::vector<std::vector<uint32_t>> endos(k, std::vector<uint32_t>(q));
    for (size_t j = 0; j < k; ++j)
      for (uint32_t a = 0; a < q; ++a) {
        auto v = A->vec_of(a);
        endos[j][a] = A->letter_of(mat_vec(r.mats[j], v));
      }
    return make_hom_rule(A, r.memory, std::move(endos));
  }

  std::vector<uint32_t> pat(k, A->neutral());
  std::vector<std::vector<uint32_t>> endos(k, std::vector<uint32_t>(q));
  for (size_t j = 0; j < k; ++j) {
    for (uint32_t a = 0; a < q; ++a) {
      pat[j] = a;
      endos[j][a] = r.eval(pat);
    }
    pat[j] = A->neutral();
  }
  auto v = validate_hom_rule(A, r.memory, std::move(endos));
  if (!v.rule) return std::nullopt;
  if (!rules_equivalent(r, *v.rule, cap)) return std::nullopt;
  return std::move(*v.rule);
}

CAClass classify(const CellularAutomaton& ca, uint64_t cap) {
  if (ca.rule.body == RuleBody::Linear) return CAClass::Linear;
  if (ca.alphabet->kind() == AlphabetKind::VectorSpace)
    return as_linear_rule(ca.rule, cap) ? CAClass::Linear : CAClass::Plain;
  if (ca.rule.body == RuleBody::Hom) return CAClass::Group;
  if (ca.alphabet->kind() == AlphabetKind::FiniteGroup &&
      as_group_rule(ca.rule, cap))
    return CAClass::Group;
  return CAClass::Plain;
}

std::vector<uint32_t> WindowMap::apply(const std::vector<uint32_t>& values) const {
  if (values.size() != source.size())
    fail("DomainMismatch", "pattern does not match the source window");
  const uint32_t q = rule.alphabet->size();
  for (uint32_t v : values)
    if (v >= q) fail("DomainMismatch", "pattern value outside the alphabet");
  std::vector<uint32_t> out(target.size());
  std::vector<uint32_t> pat(rule.memory.size());
  for (size_t i = 0; i < target.size(); ++i) {
    for (size_t j = 0; j < pat.size(); ++j) pat[j] = values[positions[i][j]];
    out[i] = rule.eval(pat);
  }
  return out;
}

WindowMap window_map(const CellularAutomaton& ca, const FiniteSubset& E,
                     bool want_matrix) {
  if (!E.G || !E.G->same(*ca.universe))
    fail("DomainMismatch", "window was built over a different universe");
  WindowMap wm;
  wm.target = E;
  wm.source = product_set(E, ca.rule.memory);
  wm.rule = ca.rule;
  wm.positions.resize(E.size());
  const auto& G = ca.universe;
  for (size_t i = 0; i < E.size(); ++i) {
    auto& row = wm.positions[i];
    row.reserve(ca.rule.memory.size());
    for (const auto& m : ca.rule.memory.elems)
      row.push_back(*wm.source.index_of(G->mul(E.elems[i], m)));
  }
  if (want_matrix) wm.matrix = linear_window_system(ca, wm.source, E);
  return wm;
}

FpMat linear_window_system(const CellularAutomaton& ca, const FiniteSubset& S,
                           const FiniteSubset& E) {
  if (ca.rule.body != RuleBody::Linear)
    fail("NotLinear", "window systems need a linear rule");
  const uint32_t n = ca.alphabet->dim(), p = ca.alphabet->p();
  const auto& G = ca.universe;
  const auto& mem = ca.rule.memory;
  FpMat out(p, n * uint32_t(E.size()), n * uint32_t(S.size()));
  for (size_t i = 0; i < E.size(); ++i)
    for (size_t j = 0; j < mem.size(); ++j) {
      const FpMat& m = ca.rule.mats[j];
      if (m.is_zero()) continue;
      auto pos = S.index_of(G->mul(E.elems[i], mem.elems[j]));
      if (!pos) continue;  // reads outside S are zero
      for (uint32_t r = 0; r < n; ++r)
        for (uint32_t c = 0; c < n; ++c)
          out.add_at(uint32_t(n * i + r), uint32_t(n * *pos + c), m.at(r, c));
    }
  return out;
}

CellularAutomaton compose(const CellularAutomaton& outer, const CellularAutomaton& inner,
                          uint64_t cap) {
  if (!outer.universe->same(*inner.universe) || !outer.alphabet->same(*inner.alphabet))
    fail("IncompatibleAutomata", "operands live on different universes or alphabets");
  const GroupPtr& G = outer.universe;
  const AlphabetPtr& A = outer.alphabet;
  const FiniteSubset K = product_set(outer.rule.memory, inner.rule.memory);

  if (outer.rule.body == RuleBody::Linear && inner.rule.body == RuleBody::Linear) {
    const uint32_t n = A->dim(), p = A->p();
    std::vector<FpMat> mats(K.size(), FpMat(p, n, n));
    for (size_t i = 0; i < outer.rule.memory.size(); ++i) {
      if (outer.rule.mats[i].is_zero()) continue;
      for (size_t j = 0; j < inner.rule.memory.size(); ++j) {
        if (inner.rule.mats[j].is_zero()) continue;
        auto pos = K.index_of(G->mul(outer.rule.memory.elems[i], inner.rule.memory.elems[j]));
        mats[*pos] = mats[*pos] + outer.rule.mats[i] * inner.rule.mats[j];
      }
    }
    return make_ca(G, make_linear_rule(A, K, std::move(mats)));
  }

  if (A->group_like()) {
    auto go = as_group_rule(outer.rule, cap);
    auto gi = as_group_rule(inner.rule, cap);
    if (go && gi) {
      const uint32_t q = A->size();
      std::vector<std::vector<uint32_t>> endos(K.size(),
                                               std::vector<uint32_t>(q, A->neutral()));
      for (size_t i = 0; i < go->memory.size(); ++i)
        for (size_t j = 0; j < gi->memory.size(); ++j) {
          auto pos = K.index_of(G->mul(go->memory.elems[i], gi->memory.elems[j]));
          auto& t = endos[*pos];
          for (uint32_t x = 0; x < q; ++x)
            t[x] = A->mul(t[x], go->endos[i][gi->endos[j][x]]);
        }
      auto v = validate_hom_rule(A, K, std::move(endos));
      if (v.rule) return make_ca(G, std::move(*v.rule));
      // commuting images make this unreachable; fall through to the table path
    }
  }

  const uint32_t q = A->size();
  const size_t ko = outer.rule.memory.size(), ki = inner.rule.memory.size();
  std::vector<std::vector<size_t>> pos(ko, std::vector<size_t>(ki));
  for (size_t i = 0; i < ko; ++i)
    for (size_t j = 0; j < ki; ++j)
      pos[i][j] = *K.index_of(
          G->mul(outer.rule.memory.elems[i], inner.rule.memory.elems[j]));
  const uint64_t npat = pattern_count(q, K.size(), cap);
  std::vector<uint32_t> table(npat);
  std::vector<uint32_t> x(K.size(), 0), mid(ko), inner_pat(ki);
  for (uint64_t idx = 0; idx < npat; ++idx) {
    for (size_t i = 0; i < ko; ++i) {
      for (size_t j = 0; j < ki; ++j) inner_pat[j] = x[pos[i][j]];
      mid[i] = inner.rule.eval(inner_pat);
    }
    table[idx] = outer.rule.eval(mid);
    next_pattern(x, q);
  }
  return make_ca(G, make_table_rule(A, K, std::move(table), cap));
}

CellularAutomaton shift_ca(GroupPtr G, AlphabetPtr A, const GroupElement& g0) {
  check_element(G, g0);
  FiniteSubset M0 = FiniteSubset::of(G, {g0});
  LocalRule rule;
  switch (A->kind()) {
    case AlphabetKind::VectorSpace:
      rule = make_linear_rule(A, M0, {FpMat::identity(A->p(), A->dim())});
      break;
    case AlphabetKind::FiniteGroup: {
      std::vector<uint32_t> id_endo(A->size());
      for (uint32_t a = 0; a < A->size(); ++a) id_endo[a] = a;
      rule = make_hom_rule(A, M0, {std::move(id_endo)});
      break;
    }
    case AlphabetKind::PlainSet: {
      std::vector<uint32_t> t(A->size());
      for (uint32_t a = 0; a < A->size(); ++a) t[a] = a;
      rule = make_table_rule(A, M0, std::move(t));
      break;
    }
  }
  return make_ca(std::move(G), std::move(rule));
}

CellularAutomaton identity_ca(GroupPtr G, AlphabetPtr A) {
  GroupElement id = G->identity();
  return shift_ca(std::move(G), std::move(A), id);
}

bool ca_equal(const CellularAutomaton& a, const CellularAutomaton& b, uint64_t cap) {
  if (!a.universe->same(*b.universe) || !a.alphabet->same(*b.alphabet)) return false;
  return rules_equivalent(a.rule, b.rule, cap);
}

bool is_identity_ca(const CellularAutomaton& ca, uint64_t cap) {
  const LocalRule& r = ca.rule;
  const size_t id_pos = *r.memory.index_of(ca.universe->identity());
  const uint32_t q = ca.alphabet->size();
  switch (r.body) {
    case RuleBody::Linear: {
      FpMat eye = FpMat::identity(ca.alphabet->p(), ca.alphabet->dim());
      for (size_t j = 0; j < r.memory.size(); ++j) {
        if (j == id_pos ? !(r.mats[j] == eye) : !r.mats[j].is_zero()) return false;
      }
      return true;
    }
    case RuleBody::Hom: {
      for (size_t j = 0; j < r.memory.size(); ++j)
        for (uint32_t a = 0; a < q; ++a) {
          uint32_t want = j == id_pos ? a : ca.alphabet->neutral();
          if (r.endos[j][a] != want) return false;
        }
      return true;
    }
    case RuleBody::Table: {
      const uint64_t npat = pattern_count(q, r.memory.size(), cap);
      std::vector<uint32_t> pat(r.memory.size(), 0);
      for (uint64_t idx = 0; idx < npat; ++idx) {
        if (r.eval(pat) != pat[id_pos]) return false;
        next_pattern(pat, q);
      }
      return true;
    }
  }
  return false;
}

GroupElement PeriodicAction::project(const GroupElement& g) const {
  const auto& H = lattice_basis;
  const size_t d = H.size();
  if (g.w.size() != d) fail("DomainMismatch", "coordinate vector has the wrong length");
  std::vector<int64_t> v = g.w;
  for (size_t i = 0; i < d; ++i) {
    int64_t f = floordiv(v[i], H[i][i]);
    if (f) {
      for (size_t c = i; c < d; ++c) v[c] -= f * H[i][c];
    }
  }
  int64_t idx = 0;
  for (size_t i = 0; i < d; ++i) idx = idx * H[i][i] + v[i];
  return GroupElement{{idx}};
}

PeriodicAction periodic_action(const CellularAutomaton& ca,
                               const std::vector<std::vector<int64_t>>& lattice,
                               uint64_t cap) {
  if (ca.universe->kind() != GroupKind::FreeAbelian)
    fail("UnsupportedUniverse", "periodic actions need a free-abelian universe");
  const size_t d = ca.universe->rank();
  for (const auto& row : lattice)
    if (row.size() != d) fail("RaggedInput", "lattice row of the wrong length");
  auto H = hermite_normal_form(lattice);
  if (H.size() != d)
    fail("RankDeficientLattice", "lattice does not have full rank");
  uint64_t order = 1;
  for (size_t i = 0; i < d; ++i) {
    order *= uint64_t(H[i][i]);
    if (order > kMaxQuotientOrder)
      fail("CapExceeded", "quotient order above 4096");
  }

  PeriodicAction pa;
  pa.lattice_basis = std::move(H);

  pa.coset_reps.reserve(order);
  std::vector<int64_t> digits(d, 0);
  for (uint64_t i = 0; i < order; ++i) {
    pa.coset_reps.push_back(GroupElement{digits});
    for (size_t j = d; j-- > 0;) {
      if (++digits[j] < pa.lattice_basis[j][j]) break;
      digits[j] = 0;
    }
  }

  const uint32_t m = uint32_t(order);
  std::vector<std::vector<uint32_t>> table(m, std::vector<uint32_t>(m));
  for (uint32_t a = 0; a < m; ++a)
    for (uint32_t b = 0; b < m; ++b) {
      std::vector<int64_t> sum(d);
      for (size_t i = 0; i < d; ++i)
        sum[i] = pa.coset_reps[a].w[i] + pa.coset_reps[b].w[i];
      table[a][b] = uint32_t(pa.project(GroupElement{std::move(sum)}).w[0]);
    }
  GroupPtr Q = GroupUniverse::finite_unchecked(std::move(table));
  pa.quotient = Q;

  const LocalRule& r = ca.rule;
  const AlphabetPtr& A = ca.alphabet;
  std::vector<GroupElement> proj(r.memory.size());
  for (size_t i = 0; i < r.memory.size(); ++i) proj[i] = pa.project(r.memory.elems[i]);
  FiniteSubset Mbar = FiniteSubset::of(Q, proj);
  std::vector<size_t> pos(r.memory.size());
  for (size_t i = 0; i < r.memory.size(); ++i) pos[i] = *Mbar.index_of(proj[i]);

  LocalRule induced;
  const uint32_t q = A->size();
  switch (r.body) {
    case RuleBody::Linear: {
      std::vector<FpMat> mats(Mbar.size(), FpMat(A->p(), A->dim(), A->dim()));
      for (size_t i = 0; i < r.memory.size(); ++i)
        mats[pos[i]] = mats[pos[i]] + r.mats[i];
      induced = make_linear_rule(A, Mbar, std::move(mats));
      break;
    }
    case RuleBody::Hom: {
      std::vector<std::vector<uint32_t>> endos(Mbar.size(),
                                               std::vector<uint32_t>(q, A->neutral()));
      for (size_t i = 0; i < r.memory.size(); ++i)
        for (uint32_t a = 0; a < q; ++a)
          endos[pos[i]][a] = A->mul(endos[pos[i]][a], r.endos[i][a]);
      induced = make_hom_rule(A, Mbar, std::move(endos));
      break;
    }
    case RuleBody::Table: {
      const uint64_t npat = pattern_count(q, Mbar.size(), cap);
      std::vector<uint32_t> t(npat);
      std::vector<uint32_t> xbar(Mbar.size(), 0), x(r.memory.size());
      for (uint64_t idx = 0; idx < npat; ++idx) {
        for (size_t i = 0; i < r.memory.size(); ++i) x[i] = xbar[pos[i]];
        t[idx] = r.eval(x);
        next_pattern(xbar, q);
      }
      induced = make_table_rule(A, Mbar, std::move(t), cap);
      break;
    }
  }
  pa.induced = make_ca(Q, std::move(induced));
  return pa;
}

CellularAutomaton restrict_to_subgroup(const CellularAutomaton& ca,
                                       const SubgroupEmbedding& emb, uint64_t cap) {
  if (!emb.parent || !emb.parent->same(*ca.universe))
    fail("DomainMismatch", "embedding is rooted in a different universe");
  const LocalRule& r = ca.rule;
  std::vector<GroupElement> pre(r.memory.size());
  for (size_t i = 0; i < r.memory.size(); ++i) {
    auto x = emb.preimage(r.memory.elems[i]);
    if (!x) fail("PreconditionFailed", "memory element outside the subgroup");
    pre[i] = std::move(*x);
  }
  FiniteSubset Msub = FiniteSubset::of(emb.sub, pre);
  std::vector<size_t> pos(r.memory.size());
  for (size_t i = 0; i < r.memory.size(); ++i) pos[i] = *Msub.index_of(pre[i]);

  const AlphabetPtr& A = ca.alphabet;
  const uint32_t q = A->size();
  LocalRule out;
  switch (r.body) {
    case RuleBody::Linear: {
      std::vector<FpMat> mats(Msub.size());
      for (size_t i = 0; i < r.memory.size(); ++i) mats[pos[i]] = r.mats[i];
      out = make_linear_rule(A, Msub, std::move(mats));
      break;
    }
    case RuleBody::Hom: {
      std::vector<std::vector<uint32_t>> endos(Msub.size());
      for (size_t i = 0; i < r.memory.size(); ++i) endos[pos[i]] = r.endos[i];
      out = make_hom_rule(A, Msub, std::move(endos));
      break;
    }
    case RuleBody::Table: {
      const uint64_t npat = pattern_count(q, Msub.size(), cap);
      std::vector<uint32_t> t(npat);
      std::vector<uint32_t> xs(Msub.size(), 0), x(r.memory.size());
      for (uint64_t idx = 0; idx < npat; ++idx) {
        for (size_t i = 0; i < r.memory.size(); ++i) x[i] = xs[pos[i]];
        t[idx] = r.eval(x);
        next_pattern(xs, q);
      }
      out = make_table_rule(A, Msub, std::move(t), cap);
      break;
    }
  }
  return make_ca(emb.sub, std::move(out));
}

}  // namespace gca
