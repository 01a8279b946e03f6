#include "gca/deciders.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gca/error.hpp"
#include "gca/serial.hpp"

namespace gca {
namespace {

constexpr uint32_t kUnset = 0xffffffffu;

void check_universe(const CellularAutomaton& ca, const FiniteSubset& S) {
  if (!S.G || !S.G->same(*ca.universe))
    fail("DomainMismatch", "window was built over a different universe");
}

CellularAutomaton with_rule(const CellularAutomaton& ca, LocalRule r) {
  CellularAutomaton out;
  out.universe = ca.universe;
  out.alphabet = ca.alphabet;
  out.rule = std::move(r);
  return out;
}

// Verified algebraic form of the rule; at most one branch is populated.
// Vector-space alphabets are linear or nothing: their additive endomorphisms
// are exactly the linear maps, so there is no separate group form.
struct RuleForm {
  std::optional<LocalRule> linear;
  std::optional<LocalRule> hom;
  bool structured() const { return linear.has_value() || hom.has_value(); }
};

RuleForm rule_form(const CellularAutomaton& ca, uint64_t cap) {
  RuleForm f;
  if (ca.alphabet->kind() == AlphabetKind::VectorSpace) {
    f.linear = as_linear_rule(ca.rule, cap);
    return f;
  }
  if (ca.alphabet->kind() == AlphabetKind::FiniteGroup)
    f.hom = as_group_rule(ca.rule, cap);
  return f;
}

bool next_pattern(std::vector<uint32_t>& pat, uint32_t q) {
  for (size_t i = pat.size(); i-- > 0;) {
    if (++pat[i] < q) return true;
    pat[i] = 0;
  }
  return false;
}

// ---- backtracking over window assignments -------------------------------
//
// Finds the lexicographically least assignment of the source window (in
// canonical window order, values ascending) that evaluates to `targets` on
// every target site, subject to pinned values and the two side constraints.
// Rows are checked as soon as their last unknown is placed.

struct WindowSearchSpec {
  const WindowMap* wm = nullptr;
  std::vector<uint32_t> targets;        // one letter per target site
  std::vector<uint32_t> seed;           // per source site; kUnset = unknown
  std::optional<size_t> nonneutral_at;  // source index forced != neutral
  bool forbid_all_neutral = false;      // unknowns may not all stay neutral
};

struct WindowSearchResult {
  std::optional<std::vector<uint32_t>> values;  // full source assignment
  uint64_t visited = 0;
};

WindowSearchResult window_search(const WindowSearchSpec& spec, uint64_t budget) {
  const WindowMap& wm = *spec.wm;
  const AlphabetPtr& A = wm.rule.alphabet;
  const uint32_t q = A->size();
  const uint32_t neutral = A->neutral();
  WindowSearchResult res;

  std::vector<uint32_t> values = spec.seed;
  size_t nna = spec.nonneutral_at.value_or(SIZE_MAX);  // SIZE_MAX: no constraint
  if (nna != SIZE_MAX && values[nna] != kUnset) {
    if (values[nna] == neutral) return res;  // pinned to the forbidden letter
    nna = SIZE_MAX;                          // pinned and already satisfied
  }

  std::vector<size_t> unknowns;
  std::vector<size_t> depth(values.size(), SIZE_MAX);
  for (size_t i = 0; i < values.size(); ++i)
    if (values[i] == kUnset) {
      depth[i] = unknowns.size();
      unknowns.push_back(i);
    }
  const size_t K = unknowns.size();

  std::vector<uint32_t> buf(wm.rule.memory.size());
  auto row_ok = [&](size_t row) {
    const auto& pos = wm.positions[row];
    for (size_t j = 0; j < pos.size(); ++j) buf[j] = values[pos[j]];
    return wm.rule.eval(buf) == spec.targets[row];
  };

  std::vector<std::vector<size_t>> due(K);
  for (size_t row = 0; row < wm.positions.size(); ++row) {
    size_t dmax = SIZE_MAX;
    for (size_t p : wm.positions[row])
      if (depth[p] != SIZE_MAX && (dmax == SIZE_MAX || depth[p] > dmax)) dmax = depth[p];
    if (dmax == SIZE_MAX) {
      if (!row_ok(row)) return res;  // fully pinned row already violated
    } else {
      due[dmax].push_back(row);
    }
  }

  if (K == 0) {
    if (spec.forbid_all_neutral) return res;  // only the empty assignment exists
    res.values = std::move(values);
    return res;
  }

  std::vector<uint32_t> val(K, 0);
  std::vector<uint32_t> nn(K + 1, 0);  // non-neutral unknowns below each depth
  size_t k = 0;
  while (true) {
    if (val[k] >= q) {
      if (k == 0) return res;
      --k;
      ++val[k];
      continue;
    }
    const uint32_t v = val[k];
    if (nna != SIZE_MAX && unknowns[k] == nna && v == neutral) {
      ++val[k];
      continue;
    }
    if (spec.forbid_all_neutral && k + 1 == K && nn[k] == 0 && v == neutral) {
      ++val[k];
      continue;
    }
    if (++res.visited > budget)
      throw Error("BudgetExceeded", "window search budget exhausted")
          .with_partial(res.visited);
    values[unknowns[k]] = v;
    bool ok = true;
    for (size_t row : due[k])
      if (!row_ok(row)) {
        ok = false;
        break;
      }
    if (!ok) {
      ++val[k];
      continue;
    }
    nn[k + 1] = nn[k] + (v != neutral ? 1u : 0u);
    if (k + 1 == K) {
      res.values = std::move(values);
      return res;
    }
    ++k;
    val[k] = 0;
  }
}

Pattern letters_from_vec(const AlphabetPtr& A, const FiniteSubset& window,
                         const std::vector<uint32_t>& flat) {
  const uint32_t dim = A->dim();
  Pattern pat;
  pat.window = window;
  pat.values.resize(window.size());
  for (size_t i = 0; i < window.size(); ++i) {
    std::span<const uint32_t> v(flat.data() + i * dim, dim);
    pat.values[i] = A->letter_of(v);
  }
  return pat;
}

Json kernel_element_witness(const Pattern& pat) {
  return Json{{"kind", "kernel_element"}, {"pattern", pattern_to_json(pat)}};
}

// All full-rank sublattices of Z^d of the given index, as Hermite-normal-form
// bases: positive diagonal with the index as product, entries above each
// pivot reduced into [0, pivot). Deterministic order: diagonal tuples
// lexicographically, then the above-diagonal odometer.
std::vector<std::vector<std::vector<int64_t>>> lattices_of_index(size_t d, uint32_t index) {
  std::vector<std::vector<std::vector<int64_t>>> out;
  if (d == 0) return out;
  std::vector<int64_t> diag(d, 1);

  auto emit = [&]() {
    std::vector<std::pair<size_t, size_t>> cells;  // (row, col), row < col
    for (size_t i = 0; i < d; ++i)
      for (size_t j = i + 1; j < d; ++j) cells.emplace_back(i, j);
    std::vector<int64_t> off(cells.size(), 0);
    while (true) {
      std::vector<std::vector<int64_t>> basis(d, std::vector<int64_t>(d, 0));
      for (size_t i = 0; i < d; ++i) basis[i][i] = diag[i];
      for (size_t c = 0; c < cells.size(); ++c)
        basis[cells[c].first][cells[c].second] = off[c];
      out.push_back(std::move(basis));
      size_t c = cells.size();
      bool carried = true;
      while (c-- > 0) {
        if (++off[c] < diag[cells[c].second]) {
          carried = false;
          break;
        }
        off[c] = 0;
      }
      if (carried) break;
    }
  };

  auto place = [&](auto&& self, size_t i, uint32_t rem) -> void {
    if (i + 1 == d) {
      diag[i] = rem;
      emit();
      return;
    }
    for (uint32_t v = 1; v <= rem; ++v)
      if (rem % v == 0) {
        diag[i] = v;
        self(self, i + 1, rem / v);
      }
  };
  place(place, 0, index);
  return out;
}

// The lexicographically least preimage of the single-site deviation (letter a
// at the identity) among configurations supported on ball(r), or nullopt.
std::optional<Pattern> deviation_preimage(const CellularAutomaton& ca, const RuleForm& form,
                                          uint32_t a, uint32_t r, uint64_t budget) {
  const GroupPtr& G = ca.universe;
  const AlphabetPtr& A = ca.alphabet;
  FiniteSubset S = ball(G, r);
  FiniteSubset E = product_set(S, ca.rule.memory);
  const size_t id_tgt = *E.index_of(G->identity());
  if (form.linear) {
    CellularAutomaton lca = with_rule(ca, *form.linear);
    FpMat W = linear_window_system(lca, S, E);
    const uint32_t dim = A->dim();
    std::vector<uint32_t> b(W.rows(), 0);
    auto va = A->vec_of(a);
    for (uint32_t i = 0; i < dim; ++i) b[id_tgt * dim + i] = va[i];
    auto x = solve_lex_min(W, b);
    if (!x) return std::nullopt;
    return letters_from_vec(A, S, *x);
  }
  WindowMap wm = window_map(ca, E);
  WindowSearchSpec spec;
  spec.wm = &wm;
  spec.targets.assign(E.size(), A->neutral());
  spec.targets[id_tgt] = a;
  spec.seed.assign(wm.source.size(), A->neutral());
  for (const auto& e : S.elems) spec.seed[*wm.source.index_of(e)] = kUnset;
  auto res = window_search(spec, budget);
  if (!res.values) return std::nullopt;
  Pattern pat;
  pat.window = S;
  pat.values.resize(S.size());
  for (size_t i = 0; i < S.size(); ++i)
    pat.values[i] = (*res.values)[*wm.source.index_of(S.elems[i])];
  return pat;
}

// Memory coefficients of a one-dimensional linear rule: (site, scalar) for
// every nonzero matrix entry. Scalar alphabets only.
std::vector<std::pair<GroupElement, uint32_t>> scalar_support(const LocalRule& lin) {
  std::vector<std::pair<GroupElement, uint32_t>> out;
  for (size_t j = 0; j < lin.memory.size(); ++j)
    if (!lin.mats[j].is_zero()) out.emplace_back(lin.memory.elems[j], lin.mats[j].at(0, 0));
  return out;
}

}  // namespace

FiniteSubset escalation_window(const CellularAutomaton& ca, uint32_t n) {
  return ball(ca.universe, covering_radius(ca.rule.memory) + n);
}

KernelWindowReport kernel_window_over(const CellularAutomaton& ca, const FiniteSubset& E,
                                      uint64_t budget) {
  check_universe(ca, E);
  if (E.size() == 0) fail("PreconditionFailed", "empty window");
  const GroupPtr& G = ca.universe;
  const AlphabetPtr& A = ca.alphabet;
  KernelWindowReport rep;
  rep.n = covering_radius(E);

  FiniteSubset source = product_set(E, ca.rule.memory);
  auto id_pos = source.index_of(G->identity());
  if (!id_pos) fail("PreconditionFailed", "window domain misses the identity site");

  RuleForm form = rule_form(ca, kDefaultCap);
  if (form.linear) {
    CellularAutomaton lca = with_rule(ca, *form.linear);
    FpMat W = linear_window_system(lca, source, E);
    const uint32_t dim = A->dim();
    std::vector<uint32_t> block(dim);
    for (uint32_t i = 0; i < dim; ++i) block[i] = uint32_t(*id_pos) * dim + i;
    auto x = lex_min_kernel_vector(W, block);
    if (!x) {
      rep.empty = true;
      return rep;
    }
    rep.sample = letters_from_vec(A, source, *x);
    return rep;
  }
  if (form.hom) {
    WindowMap wm = window_map(ca, E);
    WindowSearchSpec spec;
    spec.wm = &wm;
    spec.targets.assign(E.size(), A->neutral());
    spec.seed.assign(wm.source.size(), kUnset);
    spec.nonneutral_at = *id_pos;
    auto res = window_search(spec, budget);
    rep.visited = res.visited;
    if (!res.values) {
      rep.empty = true;
      return rep;
    }
    rep.sample = Pattern{std::move(wm.source), std::move(*res.values)};
    return rep;
  }
  fail("NotAGroupOrLinearCA", "kernel windows need a verified group or linear rule");
}

KernelWindowReport kernel_window(const CellularAutomaton& ca, uint32_t n, uint64_t budget) {
  KernelWindowReport rep = kernel_window_over(ca, escalation_window(ca, n), budget);
  rep.n = n;
  return rep;
}

Verdict certify_injective(const CellularAutomaton& ca, uint32_t max_n, uint64_t budget) {
  Verdict v;
  Json windows = Json::array();
  std::optional<Pattern> last;
  for (uint32_t n = 0; n <= max_n; ++n) {
    auto rep = kernel_window(ca, n, budget);
    windows.push_back(Json{{"n", n}, {"empty", rep.empty}, {"visited", rep.visited}});
    if (!rep.empty) {
      last = rep.sample;
      continue;
    }
    v.status = Status::CertifiedYes;
    v.radius = n;
    v.witness = Json{{"kind", "kernel_window_empty"},
                     {"n", n},
                     {"window_radius", covering_radius(ca.rule.memory) + n}};
    Json mono = Json::array();
    for (uint32_t m = n + 1; m <= n + 3; ++m) {
      if (!kernel_window(ca, m, budget).empty)
        fail("InternalError", "kernel-window emptiness failed to persist upward");
      mono.push_back(m);
    }
    v.transcript = Json{{"windows", windows}, {"monotone_checked", mono}};
    return v;
  }
  v.status = Status::Unknown;
  v.radius = max_n;
  v.transcript = Json{{"windows", windows}};
  if (last) v.transcript["last_sample"] = pattern_to_json(*last);
  return v;
}

std::optional<Pattern> supported_kernel_witness(const CellularAutomaton& ca, uint32_t r,
                                                uint64_t budget) {
  const GroupPtr& G = ca.universe;
  const AlphabetPtr& A = ca.alphabet;
  RuleForm form = rule_form(ca, kDefaultCap);
  if (!form.structured())
    fail("NotAGroupOrLinearCA", "kernel elements need a verified group or linear rule");
  FiniteSubset S = ball(G, r);
  FiniteSubset E = product_set(S, ca.rule.memory);
  if (form.linear) {
    CellularAutomaton lca = with_rule(ca, *form.linear);
    FpMat W = linear_window_system(lca, S, E);
    auto x = lex_min_kernel_vector(W, {});
    if (!x) return std::nullopt;
    return letters_from_vec(A, S, *x);
  }
  WindowMap wm = window_map(ca, E);
  WindowSearchSpec spec;
  spec.wm = &wm;
  spec.targets.assign(E.size(), A->neutral());
  spec.seed.assign(wm.source.size(), A->neutral());
  for (const auto& e : S.elems) spec.seed[*wm.source.index_of(e)] = kUnset;
  spec.forbid_all_neutral = true;
  auto res = window_search(spec, budget);
  if (!res.values) return std::nullopt;
  Pattern pat;
  pat.window = S;
  pat.values.resize(S.size());
  for (size_t i = 0; i < S.size(); ++i)
    pat.values[i] = (*res.values)[*wm.source.index_of(S.elems[i])];
  return pat;
}

std::optional<Json> finite_injectivity_witness(const CellularAutomaton& ca, uint64_t cap,
                                               uint64_t budget) {
  const GroupPtr& G = ca.universe;
  if (G->kind() != GroupKind::Finite)
    fail("UnsupportedUniverse", "exhaustive injectivity needs a finite universe");
  const AlphabetPtr& A = ca.alphabet;
  FiniteSubset E = FiniteSubset::of(G, enumerate_group(G));
  RuleForm form = rule_form(ca, cap);
  if (form.linear) {
    CellularAutomaton lca = with_rule(ca, *form.linear);
    FpMat W = linear_window_system(lca, E, E);
    auto x = lex_min_kernel_vector(W, {});
    if (!x) return std::nullopt;
    return kernel_element_witness(letters_from_vec(A, E, *x));
  }
  if (form.hom) {
    WindowMap wm = window_map(ca, E);
    WindowSearchSpec spec;
    spec.wm = &wm;
    spec.targets.assign(E.size(), A->neutral());
    spec.seed.assign(wm.source.size(), kUnset);
    spec.forbid_all_neutral = true;
    auto res = window_search(spec, budget);
    if (!res.values) return std::nullopt;
    return kernel_element_witness(Pattern{std::move(wm.source), std::move(*res.values)});
  }
  const uint32_t q = A->size();
  const uint64_t total = pattern_count(q, E.size(), cap);
  if (total >= uint64_t(kUnset)) fail("CapExceeded", "configuration space too large to index");
  WindowMap wm = window_map(ca, E);
  std::vector<uint32_t> first(total, kUnset);
  std::vector<uint32_t> x(wm.source.size(), 0);
  for (uint64_t idx = 0; idx < total; ++idx) {
    auto y = wm.apply(x);
    const uint64_t img = pattern_index(y, q);
    if (first[img] != kUnset) {
      Pattern a{E, pattern_of_index(first[img], q, E.size())};
      Pattern b{E, x};
      Pattern im{E, y};
      return Json{{"kind", "colliding_pair"},
                  {"first", pattern_to_json(a)},
                  {"second", pattern_to_json(b)},
                  {"image", pattern_to_json(im)}};
    }
    first[img] = uint32_t(idx);
    next_pattern(x, q);
  }
  return std::nullopt;
}

std::optional<Json> finite_surjectivity_witness(const CellularAutomaton& ca, uint64_t cap) {
  const GroupPtr& G = ca.universe;
  if (G->kind() != GroupKind::Finite)
    fail("UnsupportedUniverse", "exhaustive surjectivity needs a finite universe");
  const AlphabetPtr& A = ca.alphabet;
  FiniteSubset E = FiniteSubset::of(G, enumerate_group(G));
  RuleForm form = rule_form(ca, cap);
  if (form.linear) {
    CellularAutomaton lca = with_rule(ca, *form.linear);
    FpMat W = linear_window_system(lca, E, E);
    auto z = lex_min_outside_colspace(W);
    if (!z) return std::nullopt;
    return Json{{"kind", "orphan"}, {"pattern", pattern_to_json(letters_from_vec(A, E, *z))}};
  }
  const uint32_t q = A->size();
  const uint64_t total = pattern_count(q, E.size(), cap);
  WindowMap wm = window_map(ca, E);
  std::vector<bool> hit(total, false);
  std::vector<uint32_t> x(wm.source.size(), 0);
  for (uint64_t idx = 0; idx < total; ++idx) {
    hit[pattern_index(wm.apply(x), q)] = true;
    next_pattern(x, q);
  }
  for (uint64_t i = 0; i < total; ++i)
    if (!hit[i])
      return Json{{"kind", "orphan"},
                  {"pattern", pattern_to_json(Pattern{E, pattern_of_index(i, q, E.size())})}};
  return std::nullopt;
}

Verdict refute_injective(const CellularAutomaton& ca, uint32_t bound, uint64_t cap,
                         uint64_t budget) {
  Verdict v;
  const GroupPtr& G = ca.universe;
  if (G->kind() == GroupKind::Finite) {
    auto w = finite_injectivity_witness(ca, cap, budget);
    if (w) {
      v.status = Status::CertifiedNo;
      v.witness = *w;
      v.transcript = Json{{"method", "finite_exhaustive"}};
    } else {
      v.status = Status::Unknown;
      v.transcript = Json{{"method", "finite_exhaustive"}, {"exhausted", true}};
    }
    return v;
  }
  RuleForm form = rule_form(ca, cap);
  if (!form.structured() && G->kind() == GroupKind::Free)
    fail("UnsupportedUniverse", "no refutation method for plain rules on a free universe");
  Json phases = Json::array();
  if (form.structured()) {
    for (uint32_t r = 0; r <= bound; ++r) {
      auto w = supported_kernel_witness(ca, r, budget);
      if (w) {
        v.status = Status::CertifiedNo;
        v.radius = r;
        v.witness = kernel_element_witness(*w);
        phases.push_back(Json{{"phase", "supported_kernel"}, {"radius", r}});
        v.transcript = Json{{"phases", phases}};
        return v;
      }
    }
    phases.push_back(Json{{"phase", "supported_kernel"}, {"max_radius", bound}, {"found", false}});
  }
  if (G->kind() == GroupKind::FreeAbelian) {
    uint64_t quotients = 0;
    for (uint32_t index = 1; index <= bound; ++index) {
      for (const auto& basis : lattices_of_index(G->rank(), index)) {
        auto pa = periodic_action(ca, basis, cap);
        ++quotients;
        auto w = finite_injectivity_witness(pa.induced, cap, budget);
        if (w) {
          v.status = Status::CertifiedNo;
          v.witness = Json{{"kind", "periodic_collision"},
                           {"lattice", basis},
                           {"quotient_witness", *w}};
          phases.push_back(
              Json{{"phase", "periodic"}, {"index", index}, {"quotients", quotients}});
          v.transcript = Json{{"phases", phases}};
          return v;
        }
      }
    }
    phases.push_back(
        Json{{"phase", "periodic"}, {"max_index", bound}, {"quotients", quotients}});
  }
  v.status = Status::Unknown;
  v.radius = bound;
  v.transcript = Json{{"phases", phases}};
  return v;
}

Verdict goe_search(const CellularAutomaton& ca, const FiniteSubset& E, uint64_t cap) {
  check_universe(ca, E);
  if (E.size() == 0) fail("PreconditionFailed", "empty window");
  Verdict v;
  v.radius = covering_radius(E);
  const AlphabetPtr& A = ca.alphabet;
  RuleForm form = rule_form(ca, cap);
  if (form.linear) {
    CellularAutomaton lca = with_rule(ca, *form.linear);
    FiniteSubset source = product_set(E, ca.rule.memory);
    FpMat W = linear_window_system(lca, source, E);
    auto z = lex_min_outside_colspace(W);
    if (!z) {
      v.status = Status::Unknown;
      v.transcript = Json{{"window_consistent", true}};
      return v;
    }
    v.status = Status::CertifiedNo;
    v.witness = Json{{"kind", "orphan"}, {"pattern", pattern_to_json(letters_from_vec(A, E, *z))}};
    return v;
  }
  WindowMap wm = window_map(ca, E);
  const uint32_t q = A->size();
  const uint64_t nsrc = pattern_count(q, wm.source.size(), cap);
  const uint64_t ntgt = pattern_count(q, E.size(), cap);
  std::vector<bool> hit(ntgt, false);
  std::vector<uint32_t> x(wm.source.size(), 0);
  for (uint64_t i = 0; i < nsrc; ++i) {
    hit[pattern_index(wm.apply(x), q)] = true;
    next_pattern(x, q);
  }
  for (uint64_t i = 0; i < ntgt; ++i)
    if (!hit[i]) {
      v.status = Status::CertifiedNo;
      v.witness = Json{{"kind", "orphan"},
                       {"pattern", pattern_to_json(Pattern{E, pattern_of_index(i, q, E.size())})}};
      return v;
    }
  v.status = Status::Unknown;
  v.transcript = Json{{"window_consistent", true}};
  return v;
}

Verdict check_surjective_finite(const CellularAutomaton& ca, uint64_t cap) {
  if (ca.universe->kind() != GroupKind::Finite)
    fail("UnsupportedUniverse", "exhaustive surjectivity needs a finite universe");
  Verdict v;
  auto w = finite_surjectivity_witness(ca, cap);
  if (w) {
    v.status = Status::CertifiedNo;
    v.witness = *w;
  } else {
    v.status = Status::CertifiedYes;
    v.transcript = Json{{"exhaustive", true}};
  }
  return v;
}

InverseSynthesis synthesize_inverse(const CellularAutomaton& ca, uint32_t max_radius,
                                    uint64_t cap, uint64_t budget) {
  const GroupPtr& G = ca.universe;
  const AlphabetPtr& A = ca.alphabet;
  RuleForm form = rule_form(ca, cap);
  if (!form.structured())
    fail("NotAGroupOrLinearCA", "inverse synthesis needs a verified group or linear rule");
  InverseSynthesis out;
  Json attempts = Json::array();
  for (uint32_t r = 0; r <= max_radius; ++r) {
    FiniteSubset N = ball(G, r);
    std::optional<LocalRule> eta;
    if (form.linear) {
      CellularAutomaton lca = with_rule(ca, *form.linear);
      FiniteSubset source = product_set(N, ca.rule.memory);
      FpMat Wt = linear_window_system(lca, source, N).transpose();
      const uint32_t dim = A->dim();
      const size_t id_pos = *source.index_of(G->identity());
      std::vector<std::vector<uint32_t>> yrows;
      for (uint32_t i = 0; i < dim; ++i) {
        std::vector<uint32_t> b(Wt.rows(), 0);
        b[id_pos * dim + i] = 1;
        auto y = solve_lex_min(Wt, b);
        if (!y) break;
        yrows.push_back(std::move(*y));
      }
      if (yrows.size() == dim) {
        std::vector<FpMat> mats(N.size(), FpMat(A->p(), dim, dim));
        for (size_t j = 0; j < N.size(); ++j)
          for (uint32_t i = 0; i < dim; ++i)
            for (uint32_t c = 0; c < dim; ++c) mats[j].set(i, c, yrows[i][j * dim + c]);
        eta = make_linear_rule(A, N, std::move(mats));
      }
    } else {
      auto rep = kernel_window_over(ca, N, budget);
      if (rep.empty) {
        WindowMap wm = window_map(ca, N);
        const uint32_t q = A->size();
        const uint64_t nsrc = pattern_count(q, wm.source.size(), cap);
        const uint64_t ntgt = pattern_count(q, N.size(), cap);
        const size_t id_pos = *wm.source.index_of(G->identity());
        std::vector<uint32_t> table(ntgt, A->neutral());
        std::vector<bool> seen(ntgt, false);
        std::vector<uint32_t> x(wm.source.size(), 0);
        for (uint64_t i = 0; i < nsrc; ++i) {
          const uint64_t yi = pattern_index(wm.apply(x), q);
          if (seen[yi]) {
            if (table[yi] != x[id_pos])
              fail("InternalError", "window image fails to determine the center letter");
          } else {
            seen[yi] = true;
            table[yi] = x[id_pos];
          }
          next_pattern(x, q);
        }
        eta = make_table_rule(A, N, std::move(table), cap);
      }
    }
    if (!eta) {
      attempts.push_back(Json{{"radius", r}, {"determined", false}});
      continue;
    }
    CellularAutomaton sigma = make_ca(G, std::move(*eta));
    if (!is_identity_ca(compose(sigma, ca, cap), cap))
      fail("InternalError", "synthesized rule is not a left inverse");
    const bool right = is_identity_ca(compose(ca, sigma, cap), cap);
    attempts.push_back(Json{{"radius", r}, {"determined", true}, {"right_identity", right}});
    if (right) {
      out.verdict.status = Status::CertifiedYes;
      out.verdict.radius = r;
      out.verdict.witness = Json{{"kind", "inverse_rule"}, {"rule", rule_to_json(sigma.rule)}};
      out.verdict.transcript =
          Json{{"attempts", attempts}, {"left_identity", true}, {"right_identity", true}};
      out.inverse = std::move(sigma);
      return out;
    }
  }
  out.verdict.status = Status::Unknown;
  out.verdict.radius = max_radius;
  out.verdict.transcript = Json{{"attempts", attempts}};
  return out;
}

Verdict pre_injectivity(const CellularAutomaton& ca, uint32_t support_radius, uint64_t cap,
                        uint64_t budget) {
  Verdict v;
  const GroupPtr& G = ca.universe;
  if (G->kind() == GroupKind::Finite) {
    auto w = finite_injectivity_witness(ca, cap, budget);
    if (w) {
      v.status = Status::CertifiedNo;
      v.witness = *w;
    } else {
      v.status = Status::CertifiedYes;
    }
    v.transcript = Json{{"reduction", "finite_injectivity"}};
    return v;
  }
  RuleForm form = rule_form(ca, cap);
  if (!form.structured())
    fail("UnsupportedCombination",
         "pre-injectivity on an infinite universe needs a group or linear rule");
  if (form.linear && G->kind() == GroupKind::FreeAbelian && ca.alphabet->dim() == 1) {
    auto supp = scalar_support(*form.linear);
    v.transcript = Json{{"oracle", "laurent_domain"}, {"support_size", supp.size()}};
    if (supp.empty()) {
      v.status = Status::CertifiedNo;
      v.radius = 0;
      auto w = supported_kernel_witness(ca, 0, budget);
      v.witness = kernel_element_witness(*w);
    } else {
      v.status = Status::CertifiedYes;
      v.witness = Json{{"kind", "laurent_domain"}, {"support_size", supp.size()}};
    }
    return v;
  }
  for (uint32_t r = 0; r <= support_radius; ++r) {
    auto w = supported_kernel_witness(ca, r, budget);
    if (w) {
      v.status = Status::CertifiedNo;
      v.radius = r;
      v.witness = kernel_element_witness(*w);
      v.transcript = Json{{"method", "supported_kernel"}};
      return v;
    }
  }
  v.status = Status::Unknown;
  v.radius = support_radius;
  v.transcript = Json{{"method", "supported_kernel"}, {"exhausted_radius", support_radius}};
  return v;
}

Verdict post_surjectivity(const CellularAutomaton& ca, uint32_t deviation_radius,
                          uint32_t search_radius, uint64_t cap, uint64_t budget) {
  Verdict v;
  const GroupPtr& G = ca.universe;
  const AlphabetPtr& A = ca.alphabet;
  if (G->kind() == GroupKind::Finite) {
    v = check_surjective_finite(ca, cap);
    v.transcript["reduction"] = "finite_surjectivity";
    return v;
  }
  RuleForm form = rule_form(ca, cap);
  if (!form.structured())
    fail("NotAGroupOrLinearCA",
         "post-surjectivity on an infinite universe needs a group or linear rule");
  v.transcript["deviation_radius"] = deviation_radius;
  if (form.linear && G->kind() == GroupKind::FreeAbelian && A->dim() == 1) {
    auto supp = scalar_support(*form.linear);
    v.transcript["oracle"] = "laurent_unit";
    v.transcript["support_size"] = supp.size();
    if (supp.size() != 1) {
      v.status = Status::CertifiedNo;
      v.witness = Json{{"kind", "laurent_unit"}, {"support_size", supp.size()}};
      return v;
    }
    const GroupElement& h = supp[0].first;
    const uint32_t minv = fp_inv(supp[0].second, A->p());
    FiniteSubset Sh = FiniteSubset::of(G, {h, G->identity()});
    FiniteSubset E = product_set(Sh, ca.rule.memory);
    const size_t id_tgt = *E.index_of(G->identity());
    Json per = Json::array();
    for (uint32_t a = 1; a < A->size(); ++a) {
      Pattern w{FiniteSubset::of(G, {h}), {(minv * a) % A->p()}};
      auto img = evaluate_padded(ca, w, E);
      for (size_t i = 0; i < E.size(); ++i)
        if (img[i] != (i == id_tgt ? a : A->neutral()))
          fail("InternalError", "monomial preimage failed to evaluate back");
      per.push_back(Json{{"letter", a}, {"pattern", pattern_to_json(w)}});
    }
    v.status = Status::CertifiedYes;
    v.radius = covering_radius(FiniteSubset::of(G, {h}));
    v.witness = Json{{"kind", "deviation_preimages"}, {"preimages", per}};
    return v;
  }
  Json per = Json::array();
  int64_t used = 0;
  for (uint32_t a = 0; a < A->size(); ++a) {
    if (a == A->neutral()) continue;
    std::optional<Pattern> found;
    for (uint32_t r = 0; r <= search_radius && !found; ++r) {
      found = deviation_preimage(ca, form, a, r, budget);
      if (found) used = std::max<int64_t>(used, r);
    }
    if (!found) {
      v.status = Status::Unknown;
      v.radius = search_radius;
      v.transcript["stuck_letter"] = a;
      return v;
    }
    per.push_back(Json{{"letter", a}, {"pattern", pattern_to_json(*found)}});
  }
  v.status = Status::CertifiedYes;
  v.radius = used;
  v.witness = Json{{"kind", "deviation_preimages"}, {"preimages", per}};
  return v;
}

Exact1dResult exact_1d_oracle(const CellularAutomaton& ca, uint64_t cap) {
  const GroupPtr& G = ca.universe;
  if (G->kind() != GroupKind::FreeAbelian || G->rank() != 1)
    fail("UnsupportedUniverse", "the exact oracle runs on the one-dimensional lattice");
  int64_t lo = 0, hi = 0;
  for (const auto& e : ca.rule.memory.elems) {
    lo = std::min(lo, e.w[0]);
    hi = std::max(hi, e.w[0]);
  }
  std::vector<GroupElement> win;
  win.reserve(size_t(hi - lo + 1));
  for (int64_t k = lo; k <= hi; ++k) win.push_back(GroupElement{{k}});
  FiniteSubset C = FiniteSubset::of(G, std::move(win));
  auto table = compile_to_table(extend_rule(ca.rule, C, cap), cap);
  return exact_1d(ca.alphabet->size(), uint32_t(C.size()), table, cap);
}

Json SweepReport::to_json() const {
  Json j = Json{{"rules", rules},
                {"injective", injective},
                {"surjective_among_injective", surjective_among_injective},
                {"violations", violations},
                {"candidates", candidates}};
  j["flagged"] = flagged;
  return j;
}

SweepReport surjunctivity_sweep(const GroupPtr& G, const AlphabetPtr& A,
                                const FiniteSubset& M, uint64_t budget, uint64_t cap) {
  if (!A || A->kind() != AlphabetKind::FiniteGroup)
    fail("NotAGroupAlphabet", "the sweep enumerates endomorphism rules");
  const bool finite = G->kind() == GroupKind::Finite;
  const bool line = G->kind() == GroupKind::FreeAbelian && G->rank() == 1;
  if (!finite && !line)
    fail("UnsupportedUniverse", "no exact surjectivity oracle on this universe");
  if (!M.G || !M.G->same(*G)) fail("DomainMismatch", "memory over a different universe");
  if (M.size() == 0) fail("PreconditionFailed", "empty memory");

  SweepReport rep;
  const auto endos = enumerate_endomorphisms(A, budget);
  const size_t k = M.size();
  std::vector<size_t> pick(k, 0);
  while (true) {
    if (++rep.candidates > budget)
      throw Error("BudgetExceeded", "rule enumeration over budget")
          .with_partial(rep.candidates)
          .with_detail(rep.to_json().dump());
    std::vector<std::vector<uint32_t>> tuple;
    tuple.reserve(k);
    for (size_t i = 0; i < k; ++i) tuple.push_back(endos[pick[i]]);
    auto val = validate_hom_rule(A, M, std::move(tuple));
    if (val.rule) {
      ++rep.rules;
      CellularAutomaton ca = make_ca(G, std::move(*val.rule));
      bool inj, surj;
      if (finite) {
        inj = !finite_injectivity_witness(ca, cap, budget).has_value();
        surj = !finite_surjectivity_witness(ca, cap).has_value();
      } else {
        auto res = exact_1d_oracle(ca, cap);
        inj = res.injective;
        surj = res.surjective;
      }
      if (inj) {
        ++rep.injective;
        if (surj) {
          ++rep.surjective_among_injective;
        } else {
          ++rep.violations;
          rep.flagged.push_back(Json{{"rule", rule_to_json(ca.rule)},
                                     {"injective", true},
                                     {"surjective", false}});
        }
      }
    }
    size_t i = k;
    bool carried = true;
    while (i-- > 0) {
      if (++pick[i] < endos.size()) {
        carried = false;
        break;
      }
      pick[i] = 0;
    }
    if (carried) break;
  }
  return rep;
}

std::optional<Pattern> noncentral_witness(const LocalRule& rule, uint64_t cap) {
  const AlphabetPtr& A = rule.alphabet;
  const GroupPtr& G = rule.memory.G;
  const size_t id_pos = *rule.memory.index_of(G->identity());
  if (rule.body == RuleBody::Linear) {
    const uint32_t dim = A->dim();
    // lexicographically least x with (rule - projection) x != 0 is a unit
    // vector at the last column where the difference is nonzero
    size_t last_j = SIZE_MAX;
    uint32_t last_c = 0;
    for (size_t j = 0; j < rule.memory.size(); ++j)
      for (uint32_t c = 0; c < dim; ++c) {
        bool nonzero = false;
        for (uint32_t r = 0; r < dim && !nonzero; ++r) {
          const uint32_t want = (j == id_pos && r == c) ? 1u : 0u;
          nonzero = rule.mats[j].at(r, c) != want;
        }
        if (nonzero) {
          last_j = j;
          last_c = c;
        }
      }
    if (last_j == SIZE_MAX) return std::nullopt;
    Pattern pat;
    pat.window = rule.memory;
    pat.values.assign(rule.memory.size(), A->neutral());
    std::vector<uint32_t> e(dim, 0);
    e[last_c] = 1;
    pat.values[last_j] = A->letter_of(e);
    return pat;
  }
  const uint32_t q = A->size();
  const uint64_t npat = pattern_count(q, rule.memory.size(), cap);
  std::vector<uint32_t> pat(rule.memory.size(), 0);
  for (uint64_t idx = 0; idx < npat; ++idx) {
    if (rule.eval(pat) != pat[id_pos]) return Pattern{rule.memory, pat};
    next_pattern(pat, q);
  }
  return std::nullopt;
}

Verdict direct_finiteness_check(const CellularAutomaton& sigma, const CellularAutomaton& tau,
                                uint64_t cap) {
  if (!sigma.universe->same(*tau.universe) || !sigma.alphabet->same(*tau.alphabet))
    fail("IncompatibleAutomata", "operands live on different universes or alphabets");
  if (!rule_form(sigma, cap).structured() || !rule_form(tau, cap).structured())
    fail("NotAGroupOrLinearCA", "one-sided inverses need verified group or linear rules");
  CellularAutomaton st = compose(sigma, tau, cap);
  if (auto w = noncentral_witness(st.rule, cap))
    throw Error("PreconditionFailed", "the given composite is not the identity")
        .with_detail(pattern_to_json(*w).dump());
  CellularAutomaton ts = compose(tau, sigma, cap);
  Verdict v;
  if (auto w = noncentral_witness(ts.rule, cap)) {
    v.status = Status::CertifiedNo;
    v.witness = Json{{"kind", "distinguishing_pattern"}, {"pattern", pattern_to_json(*w)}};
  } else {
    v.status = Status::CertifiedYes;
  }
  v.transcript = Json{{"left_window", subset_to_json(st.rule.memory)},
                      {"right_window", subset_to_json(ts.rule.memory)}};
  return v;
}

std::vector<uint32_t> evaluate_padded(const CellularAutomaton& ca, const Pattern& w,
                                      const FiniteSubset& E) {
  if (!ca.alphabet->group_like())
    fail("PreconditionFailed", "padded evaluation needs a neutral letter");
  check_universe(ca, E);
  if (w.values.size() != w.window.size())
    fail("RaggedInput", "pattern values do not match its window");
  WindowMap wm = window_map(ca, E);
  std::vector<uint32_t> values(wm.source.size(), ca.alphabet->neutral());
  for (size_t i = 0; i < w.window.size(); ++i) {
    auto pos = wm.source.index_of(w.window.elems[i]);
    if (pos) values[*pos] = w.values[i];
  }
  return wm.apply(values);
}

}  // namespace gca
