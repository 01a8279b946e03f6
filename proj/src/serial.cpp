#include "gca/serial.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gca/error.hpp"

namespace gca {
namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object()) fail("MalformedConfig", "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail("MalformedConfig", std::string("missing key: ") + key);
  return *it;
}

uint64_t as_u64(const Json& v, const char* what) {
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<int64_t>() >= 0) return uint64_t(v.get<int64_t>());
  fail("MalformedConfig", std::string(what) + " must be a non-negative integer");
}

uint32_t as_u32(const Json& v, const char* what) {
  uint64_t n = as_u64(v, what);
  if (n > std::numeric_limits<uint32_t>::max())
    fail("MalformedConfig", std::string(what) + " is out of range");
  return uint32_t(n);
}

int64_t as_i64(const Json& v, const char* what) {
  if (!v.is_number_integer() && !v.is_number_unsigned())
    fail("MalformedConfig", std::string(what) + " must be an integer");
  return v.get<int64_t>();
}

std::vector<uint32_t> as_u32_vec(const Json& v, const char* what) {
  if (!v.is_array()) fail("MalformedConfig", std::string(what) + " must be an array");
  std::vector<uint32_t> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(as_u32(x, what));
  return out;
}

std::vector<std::vector<uint32_t>> as_u32_table(const Json& v, const char* what) {
  if (!v.is_array()) fail("MalformedConfig", std::string(what) + " must be an array");
  std::vector<std::vector<uint32_t>> out;
  out.reserve(v.size());
  for (const auto& row : v) out.push_back(as_u32_vec(row, what));
  return out;
}

void validate_element(const GroupPtr& G, const GroupElement& e) {
  switch (G->kind()) {
    case GroupKind::Finite:
      if (e.w.size() != 1 || e.w[0] < 0 || uint64_t(e.w[0]) >= G->order())
        fail("MalformedConfig", "element is not an index into the finite universe");
      return;
    case GroupKind::FreeAbelian:
      if (e.w.size() != G->rank())
        fail("MalformedConfig", "coordinate vector has the wrong length");
      return;
    case GroupKind::Free:
      for (size_t i = 0; i < e.w.size(); ++i) {
        int64_t x = e.w[i];
        if (x == 0 || uint64_t(x < 0 ? -x : x) > G->rank())
          fail("MalformedConfig", "word letter outside the free generators");
        if (i + 1 < e.w.size() && e.w[i + 1] == -x)
          fail("MalformedConfig", "word is not reduced");
      }
      return;
  }
}

FpMat mat_from_flat(uint32_t p, uint32_t n, const Json& v, const char* what) {
  auto flat = as_u32_vec(v, what);
  if (flat.size() != size_t(n) * n)
    fail("MalformedConfig", std::string(what) + " must hold n*n entries, row major");
  FpMat m(p, n, n);
  for (uint32_t r = 0; r < n; ++r)
    for (uint32_t c = 0; c < n; ++c) m.set(r, c, flat[size_t(r) * n + c]);
  return m;
}

Json mat_to_flat(const FpMat& m) {
  Json out = Json::array();
  for (uint32_t v : m.data()) out.push_back(v);
  return out;
}

}  // namespace

void require_keys(const Json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail("MalformedConfig", "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail("MalformedConfig", "unknown key: " + it.key());
  }
}

Json universe_to_json(const GroupPtr& G) {
  switch (G->kind()) {
    case GroupKind::Finite:
      return Json{{"kind", "finite"}, {"table", G->table()}};
    case GroupKind::FreeAbelian:
      return Json{{"kind", "free_abelian"}, {"rank", G->rank()}};
    case GroupKind::Free:
      return Json{{"kind", "free"}, {"rank", G->rank()}};
  }
  fail("InternalError", "unreachable universe kind");
}

GroupPtr universe_from_json(const Json& j) {
  const std::string kind = [&] {
    const Json& k = need(j, "kind");
    if (!k.is_string()) fail("MalformedConfig", "universe kind must be a string");
    return k.get<std::string>();
  }();
  if (kind == "cyclic") {
    require_keys(j, {"kind", "n"});
    return GroupUniverse::cyclic(as_u32(need(j, "n"), "n"));
  }
  if (kind == "dihedral") {
    require_keys(j, {"kind", "n"});
    return GroupUniverse::dihedral(as_u32(need(j, "n"), "n"));
  }
  if (kind == "symmetric") {
    require_keys(j, {"kind", "n"});
    return GroupUniverse::symmetric(as_u32(need(j, "n"), "n"));
  }
  if (kind == "finite") {
    require_keys(j, {"kind", "table"});
    return GroupUniverse::finite(as_u32_table(need(j, "table"), "table"));
  }
  if (kind == "direct_product") {
    require_keys(j, {"kind", "factors"});
    const Json& f = need(j, "factors");
    if (!f.is_array() || f.size() < 2)
      fail("MalformedConfig", "direct_product needs at least two factors");
    GroupPtr acc = universe_from_json(f[0]);
    for (size_t i = 1; i < f.size(); ++i)
      acc = GroupUniverse::direct_product(acc, universe_from_json(f[i]));
    return acc;
  }
  if (kind == "free_abelian") {
    require_keys(j, {"kind", "rank"});
    return GroupUniverse::free_abelian(as_u32(need(j, "rank"), "rank"));
  }
  if (kind == "free") {
    require_keys(j, {"kind", "rank"});
    return GroupUniverse::free_group(as_u32(need(j, "rank"), "rank"));
  }
  fail("MalformedConfig", "unrecognized universe kind: " + kind);
}

Json alphabet_to_json(const AlphabetPtr& A) {
  switch (A->kind()) {
    case AlphabetKind::PlainSet:
      return Json{{"kind", "plain"}, {"size", A->size()}};
    case AlphabetKind::FiniteGroup:
      return Json{{"kind", "finite_group"}, {"table", A->table()}};
    case AlphabetKind::VectorSpace:
      return Json{{"kind", "vector_space"}, {"p", A->p()}, {"dim", A->dim()}};
  }
  fail("InternalError", "unreachable alphabet kind");
}

AlphabetPtr alphabet_from_json(const Json& j) {
  const std::string kind = [&] {
    const Json& k = need(j, "kind");
    if (!k.is_string()) fail("MalformedConfig", "alphabet kind must be a string");
    return k.get<std::string>();
  }();
  if (kind == "plain") {
    require_keys(j, {"kind", "size"});
    return Alphabet::plain(as_u32(need(j, "size"), "size"));
  }
  if (kind == "finite_group") {
    require_keys(j, {"kind", "table"});
    return Alphabet::finite_group(as_u32_table(need(j, "table"), "table"));
  }
  if (kind == "vector_space") {
    require_keys(j, {"kind", "p", "dim"});
    return Alphabet::vector_space(as_u32(need(j, "p"), "p"), as_u32(need(j, "dim"), "dim"));
  }
  if (kind == "cyclic_group") {
    require_keys(j, {"kind", "n"});
    return Alphabet::from_group(GroupUniverse::cyclic(as_u32(need(j, "n"), "n")));
  }
  if (kind == "symmetric_group") {
    require_keys(j, {"kind", "n"});
    return Alphabet::from_group(GroupUniverse::symmetric(as_u32(need(j, "n"), "n")));
  }
  if (kind == "product_cyclic") {
    require_keys(j, {"kind", "factors"});
    auto factors = as_u32_vec(need(j, "factors"), "factors");
    if (factors.size() < 2)
      fail("MalformedConfig", "product_cyclic needs at least two factors");
    GroupPtr acc = GroupUniverse::cyclic(factors[0]);
    for (size_t i = 1; i < factors.size(); ++i)
      acc = GroupUniverse::direct_product(acc, GroupUniverse::cyclic(factors[i]));
    return Alphabet::from_group(acc);
  }
  fail("MalformedConfig", "unrecognized alphabet kind: " + kind);
}

Json element_to_json(const GroupElement& e) {
  Json out = Json::array();
  for (int64_t x : e.w) out.push_back(x);
  return out;
}

GroupElement element_from_json(const Json& j) {
  if (!j.is_array()) fail("MalformedConfig", "element must be an array of integers");
  GroupElement e;
  e.w.reserve(j.size());
  for (const auto& x : j) e.w.push_back(as_i64(x, "element entry"));
  return e;
}

Json subset_to_json(const FiniteSubset& S) {
  Json out = Json::array();
  for (const auto& e : S.elems) out.push_back(element_to_json(e));
  return out;
}

FiniteSubset subset_from_json(const GroupPtr& G, const Json& j) {
  if (!j.is_array()) fail("MalformedConfig", "subset must be an array of elements");
  std::vector<GroupElement> elems;
  elems.reserve(j.size());
  for (const auto& x : j) {
    GroupElement e = element_from_json(x);
    validate_element(G, e);
    if (!elems.empty() && !G->less(elems.back(), e))
      fail("MalformedConfig", "subset elements must be strictly increasing in canonical order");
    elems.push_back(std::move(e));
  }
  return FiniteSubset::of(G, std::move(elems));
}

Json pattern_to_json(const Pattern& pat) {
  Json values = Json::array();
  for (uint32_t v : pat.values) values.push_back(v);
  return Json{{"window", subset_to_json(pat.window)}, {"values", values}};
}

Pattern pattern_from_json(const GroupPtr& G, const Json& j) {
  require_keys(j, {"window", "values"});
  Pattern pat;
  pat.window = subset_from_json(G, need(j, "window"));
  pat.values = as_u32_vec(need(j, "values"), "values");
  if (pat.values.size() != pat.window.size())
    fail("MalformedConfig", "pattern values do not match its window");
  return pat;
}

Json rule_to_json(const LocalRule& r) {
  Json j;
  switch (r.body) {
    case RuleBody::Table: {
      j["body"] = "table";
      j["memory"] = subset_to_json(r.memory);
      Json t = Json::array();
      for (uint32_t v : r.table) t.push_back(v);
      j["table"] = t;
      return j;
    }
    case RuleBody::Hom:
      j["body"] = "hom";
      j["memory"] = subset_to_json(r.memory);
      j["endos"] = r.endos;
      return j;
    case RuleBody::Linear: {
      j["body"] = "linear";
      j["memory"] = subset_to_json(r.memory);
      Json mats = Json::array();
      for (const auto& m : r.mats) mats.push_back(mat_to_flat(m));
      j["matrices"] = mats;
      return j;
    }
  }
  fail("InternalError", "unreachable rule body");
}

LocalRule rule_from_json(const GroupPtr& G, const AlphabetPtr& A, const Json& j) {
  const std::string body = [&] {
    const Json& b = need(j, "body");
    if (!b.is_string()) fail("MalformedConfig", "rule body must be a string");
    return b.get<std::string>();
  }();
  if (body == "table") {
    require_keys(j, {"body", "memory", "table"});
    FiniteSubset M = subset_from_json(G, need(j, "memory"));
    return make_table_rule(A, M, as_u32_vec(need(j, "table"), "table"));
  }
  if (body == "hom") {
    require_keys(j, {"body", "memory", "endos"});
    FiniteSubset M = subset_from_json(G, need(j, "memory"));
    return make_hom_rule(A, M, as_u32_table(need(j, "endos"), "endos"));
  }
  if (body == "linear") {
    require_keys(j, {"body", "memory", "matrices"});
    if (A->kind() != AlphabetKind::VectorSpace)
      fail("MalformedConfig", "linear rules need a vector-space alphabet");
    FiniteSubset M = subset_from_json(G, need(j, "memory"));
    const Json& arr = need(j, "matrices");
    if (!arr.is_array() || arr.size() != M.size())
      fail("MalformedConfig", "one matrix per memory element");
    std::vector<FpMat> mats;
    mats.reserve(arr.size());
    for (const auto& m : arr) mats.push_back(mat_from_flat(A->p(), A->dim(), m, "matrix"));
    return make_linear_rule(A, M, std::move(mats));
  }
  fail("MalformedConfig", "unrecognized rule body: " + body);
}

Json ring_to_json(const GroupRingMatrix& a) {
  Json support = Json::array();
  for (const auto& [g, m] : a.support)
    support.push_back(Json{{"element", element_to_json(g)}, {"matrix", mat_to_flat(m)}});
  return Json{{"p", a.p}, {"n", a.n}, {"support", support}};
}

GroupRingMatrix ring_from_json(const GroupPtr& G, const Json& j) {
  require_keys(j, {"p", "n", "support"});
  const uint32_t p = as_u32(need(j, "p"), "p");
  const uint32_t n = as_u32(need(j, "n"), "n");
  const Json& arr = need(j, "support");
  if (!arr.is_array()) fail("MalformedConfig", "support must be an array");
  std::vector<std::pair<GroupElement, FpMat>> terms;
  terms.reserve(arr.size());
  for (const auto& t : arr) {
    require_keys(t, {"element", "matrix"});
    GroupElement g = element_from_json(need(t, "element"));
    validate_element(G, g);
    terms.emplace_back(std::move(g), mat_from_flat(p, n, need(t, "matrix"), "matrix"));
  }
  return gr_make(G, p, n, std::move(terms));
}

Json verdict_to_json(const Verdict& v) {
  return Json{{"status", to_string(v.status)},
              {"radius", v.radius ? Json(*v.radius) : Json(nullptr)},
              {"witness", v.witness},
              {"transcript", v.transcript}};
}

Verdict verdict_from_json(const Json& j) {
  require_keys(j, {"status", "radius", "witness", "transcript"});
  Verdict v;
  const Json& s = need(j, "status");
  if (!s.is_string()) fail("MalformedConfig", "status must be a string");
  v.status = status_from_string(s.get<std::string>());
  const Json& r = need(j, "radius");
  if (!r.is_null()) v.radius = as_i64(r, "radius");
  v.witness = need(j, "witness");
  v.transcript = need(j, "transcript");
  return v;
}

Json make_record(const std::string& decider, const Json& parameters, const Verdict& v,
                 const Json& job_echo, std::optional<int64_t> duration_ms) {
  Json r;
  r["tool_version"] = kToolVersion;
  r["decider"] = decider;
  r["parameters"] = parameters;
  r["status"] = to_string(v.status);
  r["radius"] = v.radius ? Json(*v.radius) : Json(nullptr);
  r["witness"] = v.witness;
  r["transcript"] = v.transcript;
  r["job"] = job_echo;
  if (duration_ms) r["duration_ms"] = *duration_ms;
  return r;
}

JobConfig job_from_json(const Json& j) {
  require_keys(j, {"universe", "alphabet", "rule", "memory", "ring", "ring_left"});
  JobConfig c;
  c.raw = j;
  c.universe = universe_from_json(need(j, "universe"));
  if (j.contains("alphabet")) c.alphabet = alphabet_from_json(j.at("alphabet"));
  if (j.contains("memory")) c.memory = subset_from_json(c.universe, j.at("memory"));
  if (j.contains("rule")) {
    if (!c.alphabet) fail("MalformedConfig", "a rule needs an alphabet");
    c.ca = make_ca(c.universe, rule_from_json(c.universe, c.alphabet, j.at("rule")));
  }
  if (j.contains("ring")) c.ring = ring_from_json(c.universe, j.at("ring"));
  if (j.contains("ring_left")) c.ring_left = ring_from_json(c.universe, j.at("ring_left"));
  return c;
}

}  // namespace gca
