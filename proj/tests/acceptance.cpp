// Acceptance gate: eight property suites over the decider stack plus a
// determinism/replay pass over the certificate corpus they emit. Prints one
// line per criterion; exits 0 iff every line is PASS. All bounds and seeds
// are pinned here so two runs of this binary are byte-comparable.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gca/deciders.hpp"
#include "gca/group_ring.hpp"
#include "gca/replay.hpp"
#include "gca/serial.hpp"

using namespace gca;

namespace {

constexpr uint32_t kCertifyMaxN = 6;
constexpr uint32_t kInverseRadius = 4;
constexpr uint32_t kLeftInverseRadius = 3;
constexpr uint32_t kPeriodBound = 6;
constexpr uint32_t kRandomLinearSamples = 200;
constexpr uint32_t kPhiPairsPerUniverse = 1000;
constexpr uint32_t kRingSamplesPerUniverse = 500;
constexpr uint32_t kRestrictionSamples = 100;

struct SuiteOutcome {
  bool pass = true;
  std::string note;
};

struct Failure {
  std::ostringstream msg;
  uint64_t count = 0;
  void hit(const std::string& what) {
    if (count == 0) msg << what;
    ++count;
  }
};

Json ca_job(const CellularAutomaton& ca) {
  Json j = Json::object();
  j["universe"] = universe_to_json(ca.universe);
  j["alphabet"] = alphabet_to_json(ca.alphabet);
  j["rule"] = rule_to_json(ca.rule);
  return j;
}

Json ring_job(const GroupRingMatrix& a) {
  Json j = Json::object();
  j["universe"] = universe_to_json(a.G);
  j["ring"] = ring_to_json(a);
  return j;
}

Json sweep_job(const GroupPtr& G, const AlphabetPtr& A, const FiniteSubset& M) {
  Json j = Json::object();
  j["universe"] = universe_to_json(G);
  j["alphabet"] = alphabet_to_json(A);
  j["memory"] = subset_to_json(M);
  return j;
}

Json suite_params(int suite, std::initializer_list<std::pair<const char*, uint64_t>> kv = {}) {
  Json p = Json::object();
  p["suite"] = suite;
  for (const auto& [k, v] : kv) p[k] = v;
  return p;
}

uint64_t pick(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

FpMat random_mat(std::mt19937_64& rng, uint32_t p, uint32_t n) {
  FpMat m(p, n, n);
  for (uint32_t r = 0; r < n; ++r)
    for (uint32_t c = 0; c < n; ++c) m.set(r, c, uint32_t(pick(rng, p)));
  return m;
}

FpMat random_invertible(std::mt19937_64& rng, uint32_t p, uint32_t n) {
  for (;;) {
    FpMat m = random_mat(rng, p, n);
    if (rank_of(m) == n) return m;
  }
}

CellularAutomaton jordan_block_ca() {
  GroupPtr Z = GroupUniverse::free_abelian(1);
  AlphabetPtr A = Alphabet::vector_space(2, 2);
  FiniteSubset M = FiniteSubset::of(Z, {GroupElement{{0}}, GroupElement{{1}}});
  FpMat id = FpMat::identity(2, 2);
  FpMat nil(2, 2, 2);
  nil.set(0, 1, 1);
  return make_ca(Z, make_linear_rule(A, M, {id, nil}));
}

CellularAutomaton scalar_z_ca(uint32_t p, const std::vector<std::pair<int64_t, uint32_t>>& coeffs) {
  GroupPtr Z = GroupUniverse::free_abelian(1);
  AlphabetPtr A = Alphabet::vector_space(p, 1);
  std::vector<GroupElement> elems;
  std::vector<FpMat> mats;
  for (const auto& [e, c] : coeffs) {
    elems.push_back(GroupElement{{e}});
    FpMat m(p, 1, 1);
    m.set(0, 0, c);
    mats.push_back(m);
  }
  return make_ca(Z, make_linear_rule(A, FiniteSubset::of(Z, elems), mats));
}

// --- criterion 1: exhaustive homomorphism rules on finite universes -------

struct SweepTask {
  uint64_t sweeps = 0, rules = 0, injective = 0, violations = 0;
  std::vector<Json> records;
  std::string error;
};

SweepTask run_sweeps(const GroupPtr& G, const AlphabetPtr& A) {
  SweepTask t;
  try {
    std::vector<FiniteSubset> memories;
    const uint32_t n = uint32_t(G->order());
    for (uint32_t i = 0; i < n; ++i)
      memories.push_back(FiniteSubset::of(G, {G->element_of_index(i)}));
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = i + 1; j < n; ++j)
        memories.push_back(
            FiniteSubset::of(G, {G->element_of_index(i), G->element_of_index(j)}));
    for (const FiniteSubset& M : memories) {
      SweepReport rep = surjunctivity_sweep(G, A, M, kDefaultSearchBudget);
      ++t.sweeps;
      t.rules += rep.rules;
      t.injective += rep.injective;
      t.violations += rep.violations;
      Verdict v;
      v.status = rep.violations == 0 ? Status::CertifiedYes : Status::CertifiedNo;
      v.witness = rep.to_json();
      t.records.push_back(
          make_record("surjunctivity_sweep", suite_params(1), v, sweep_job(G, A, M)));
    }
  } catch (const std::exception& e) {
    t.error = e.what();
  }
  return t;
}

SuiteOutcome criterion1(std::vector<Json>& corpus) {
  std::vector<GroupPtr> universes;
  for (uint32_t q = 2; q <= 6; ++q) universes.push_back(GroupUniverse::cyclic(q));
  universes.push_back(GroupUniverse::symmetric(3));
  std::vector<AlphabetPtr> alphabets = {
      Alphabet::from_group(GroupUniverse::cyclic(2)),
      Alphabet::from_group(GroupUniverse::cyclic(3)),
      Alphabet::from_group(
          GroupUniverse::direct_product(GroupUniverse::cyclic(2), GroupUniverse::cyclic(2))),
      Alphabet::from_group(GroupUniverse::symmetric(3)),
  };
  std::vector<std::future<SweepTask>> tasks;
  for (const GroupPtr& G : universes)
    for (const AlphabetPtr& A : alphabets)
      tasks.push_back(std::async(std::launch::async, run_sweeps, G, A));
  SuiteOutcome out;
  uint64_t sweeps = 0, rules = 0, injective = 0, violations = 0;
  std::string error;
  for (auto& f : tasks) {
    SweepTask t = f.get();
    if (!t.error.empty() && error.empty()) error = t.error;
    sweeps += t.sweeps;
    rules += t.rules;
    injective += t.injective;
    violations += t.violations;
    for (auto& r : t.records) corpus.push_back(std::move(r));
  }
  std::ostringstream note;
  if (!error.empty()) {
    out.pass = false;
    note << "error: " << error;
  } else {
    out.pass = violations == 0;
    note << sweeps << " sweeps, " << rules << " homomorphism rules, " << injective
         << " injective, " << violations << " surjunctivity violations";
  }
  out.note = note.str();
  return out;
}

// --- criteria 2/3/4: random linear automata on Z --------------------------

struct LinearSample {
  CellularAutomaton ca;
  bool exact_injective = false;
  bool exact_surjective = false;
  Verdict certificate;
};

std::vector<LinearSample> sample_linear_z(std::vector<Json>& corpus, Failure& f2) {
  std::mt19937_64 rng(1002);
  GroupPtr Z = GroupUniverse::free_abelian(1);
  std::vector<LinearSample> samples;
  for (uint32_t i = 0; i < kRandomLinearSamples; ++i) {
    const uint32_t p = (rng() & 1) ? 2 : 3;
    const uint32_t n = (rng() & 1) ? 1 : 2;
    const uint32_t r = n == 1 ? 2 : 1;  // keeps every bijective sample invertible by radius 4
    AlphabetPtr A = Alphabet::vector_space(p, n);
    FiniteSubset B = ball(Z, r);
    std::vector<GroupElement> elems;
    std::vector<FpMat> mats;
    while (elems.empty()) {
      elems.clear();
      mats.clear();
      for (const GroupElement& e : B.elems)
        if (rng() & 1) {
          elems.push_back(e);
          mats.push_back(random_mat(rng, p, n));
        }
    }
    LinearSample s{make_ca(Z, make_linear_rule(A, FiniteSubset::of(Z, elems), mats))};
    Exact1dResult exact = exact_1d_oracle(s.ca);
    s.exact_injective = exact.injective;
    s.exact_surjective = exact.surjective;
    s.certificate = certify_injective(s.ca, kCertifyMaxN);

    if (s.certificate.status == Status::CertifiedNo)
      f2.hit("certify_injective refuted (sample " + std::to_string(i) + ")");
    if (s.certificate.status == Status::CertifiedYes && !exact.injective)
      f2.hit("certified injective but the exact oracle disagrees (sample " +
             std::to_string(i) + ")");
    bool collision = false;
    for (uint32_t q = 1; q <= kPeriodBound; ++q) {
      PeriodicAction pa = periodic_action(s.ca, {{int64_t(q)}});
      if (finite_injectivity_witness(pa.induced)) {
        collision = true;
        if (exact.injective)
          f2.hit("periodic collision at period " + std::to_string(q) +
                 " on an exactly injective rule (sample " + std::to_string(i) + ")");
      }
    }
    if (s.certificate.status == Status::CertifiedYes && collision)
      f2.hit("certified injective with a periodic collision (sample " + std::to_string(i) + ")");

    corpus.push_back(make_record("certify_injective",
                                 suite_params(2, {{"max_n", kCertifyMaxN}}), s.certificate,
                                 ca_job(s.ca)));
    Verdict ev;
    ev.status = Status::CertifiedYes;
    ev.witness = Json::object();
    ev.witness["kind"] = "exact_1d";
    ev.witness["injective"] = exact.injective;
    ev.witness["surjective"] = exact.surjective;
    ev.witness["hull_offset"] = exact.hull_offset;
    ev.witness["hull_width"] = exact.hull_width;
    corpus.push_back(make_record("exact_1d", suite_params(2), ev, ca_job(s.ca)));
    samples.push_back(std::move(s));
  }
  return samples;
}

SuiteOutcome criterion3(const std::vector<LinearSample>& samples) {
  SuiteOutcome out;
  Failure f;
  uint64_t certified = 0, rechecks = 0;
  for (const LinearSample& s : samples) {
    if (s.certificate.status != Status::CertifiedYes) continue;
    ++certified;
    const auto n = uint32_t(*s.certificate.radius);
    for (uint32_t m = n + 1; m <= n + 3; ++m) {
      ++rechecks;
      if (!kernel_window(s.ca, m).empty)
        f.hit("kernel window nonempty at n=" + std::to_string(m) +
              " above a certificate at n=" + std::to_string(n));
    }
  }
  out.pass = f.count == 0;
  std::ostringstream note;
  if (out.pass)
    note << certified << " certificates, " << rechecks << " larger windows re-checked empty";
  else
    note << f.msg.str() << " (" << f.count << " violations)";
  out.note = note.str();
  return out;
}

SuiteOutcome criterion4(const std::vector<LinearSample>& samples, std::vector<Json>& corpus) {
  SuiteOutcome out;
  Failure f;
  uint64_t bijective = 0;
  for (const LinearSample& s : samples) {
    if (!s.exact_injective || !s.exact_surjective) continue;
    ++bijective;
    InverseSynthesis syn = synthesize_inverse(s.ca, kInverseRadius);
    if (syn.verdict.status != Status::CertifiedYes || !syn.inverse) {
      f.hit("synthesis failed on a bijective rule");
      continue;
    }
    if (direct_finiteness_check(*syn.inverse, s.ca).status != Status::CertifiedYes)
      f.hit("inverse is not a two-sided inverse (checked as left factor)");
    if (direct_finiteness_check(s.ca, *syn.inverse).status != Status::CertifiedYes)
      f.hit("inverse is not a two-sided inverse (checked as right factor)");
    corpus.push_back(make_record("synthesize_inverse",
                                 suite_params(4, {{"max_radius", kInverseRadius}}), syn.verdict,
                                 ca_job(s.ca)));
  }
  CellularAutomaton jordan = jordan_block_ca();
  InverseSynthesis jsyn = synthesize_inverse(jordan, kInverseRadius);
  if (jsyn.verdict.status != Status::CertifiedYes || !jsyn.inverse)
    f.hit("synthesis failed on the unipotent two-cell rule");
  else if (rule_to_json(jsyn.inverse->rule) != rule_to_json(jordan.rule))
    f.hit("unipotent two-cell rule is not its own inverse bit-exactly");
  else
    corpus.push_back(make_record("synthesize_inverse",
                                 suite_params(4, {{"max_radius", kInverseRadius}}),
                                 jsyn.verdict, ca_job(jordan)));
  out.pass = f.count == 0;
  std::ostringstream note;
  if (out.pass)
    note << bijective << " bijective rules inverted within radius " << kInverseRadius
         << "; self-inverse instance exact";
  else
    note << f.msg.str() << " (" << f.count << " failures)";
  out.note = note.str();
  return out;
}

// --- criterion 5: the matrix-ring / automaton correspondence --------------

GroupRingMatrix random_ring(std::mt19937_64& rng, const GroupPtr& G, uint32_t p, uint32_t n,
                            uint32_t max_terms) {
  std::vector<std::pair<GroupElement, FpMat>> terms;
  const uint32_t k = uint32_t(pick(rng, max_terms + 1));
  for (uint32_t t = 0; t < k; ++t) {
    GroupElement g = G->kind() == GroupKind::Finite
                         ? G->element_of_index(uint32_t(pick(rng, G->order())))
                         : GroupElement{{int64_t(pick(rng, 5)) - 2}};
    terms.emplace_back(std::move(g), random_mat(rng, p, n));
  }
  return gr_make(G, p, n, std::move(terms));
}

SuiteOutcome criterion5(std::vector<Json>& corpus) {
  std::mt19937_64 rng(1005);
  SuiteOutcome out;
  Failure f;
  std::vector<GroupPtr> universes = {GroupUniverse::cyclic(6), GroupUniverse::symmetric(3),
                                     GroupUniverse::free_abelian(1)};
  uint64_t pairs = 0;
  for (const GroupPtr& G : universes) {
    for (uint32_t i = 0; i < kPhiPairsPerUniverse; ++i) {
      const uint32_t p = (rng() & 1) ? 2 : 3;
      const uint32_t n = (rng() & 1) ? 1 : 2;
      GroupRingMatrix a = random_ring(rng, G, p, n, 3);
      GroupRingMatrix b = random_ring(rng, G, p, n, 3);
      GroupRingMatrix ab = gr_mul(a, b);
      CellularAutomaton lhs = phi(ab);
      CellularAutomaton rhs = compose(phi(a), phi(b));
      ++pairs;
      if (!ca_equal(lhs, rhs)) f.hit("product of rings and composite of automata disagree");
      if (i % 50 == 0) {
        Verdict v;
        v.status = Status::CertifiedYes;
        v.witness = Json::object();
        v.witness["kind"] = "automaton";
        v.witness["rule"] = rule_to_json(lhs.rule);
        corpus.push_back(make_record("phi", suite_params(5), v, ring_job(ab)));
      }
    }
    for (uint32_t p : {2u, 3u})
      for (uint32_t n : {1u, 2u}) {
        GroupRingMatrix unit = gr_unit(G, p, n);
        CellularAutomaton ident = phi(unit);
        if (noncentral_witness(ident.rule))
          f.hit("the unit ring does not map to the identity automaton");
        Verdict v;
        v.status = Status::CertifiedYes;
        v.witness = Json::object();
        v.witness["kind"] = "automaton";
        v.witness["rule"] = rule_to_json(ident.rule);
        corpus.push_back(make_record("phi", suite_params(5), v, ring_job(unit)));
      }
  }
  out.pass = f.count == 0;
  std::ostringstream note;
  if (out.pass)
    note << pairs << " random pairs multiplicative; unit maps to identity on all universes";
  else
    note << f.msg.str() << " (" << f.count << " failures)";
  out.note = note.str();
  return out;
}

// --- criterion 6: one-sided ring inverses are two-sided --------------------

SuiteOutcome criterion6(std::vector<Json>& corpus) {
  std::mt19937_64 rng(1006);
  SuiteOutcome out;
  Failure f;
  std::vector<GroupPtr> universes;
  for (uint32_t q = 2; q <= 8; ++q) universes.push_back(GroupUniverse::cyclic(q));
  universes.push_back(GroupUniverse::symmetric(3));
  universes.push_back(GroupUniverse::free_abelian(1));
  uint64_t found = 0, refuted = 0;
  for (const GroupPtr& G : universes) {
    for (uint32_t i = 0; i < kRingSamplesPerUniverse; ++i) {
      const uint32_t p = (rng() & 1) ? 2 : 3;
      const uint32_t n = (rng() & 1) ? 1 : 2;
      GroupRingMatrix a = pick(rng, 3) == 0
                              ? gr_make(G, p, n,
                                        {{G->kind() == GroupKind::Finite
                                              ? G->element_of_index(uint32_t(pick(rng, G->order())))
                                              : GroupElement{{int64_t(pick(rng, 5)) - 2}},
                                          random_invertible(rng, p, n)}})
                              : random_ring(rng, G, p, n, 3);
      std::optional<GroupRingMatrix> beta;
      uint32_t found_at = 0;
      for (uint32_t r = 0; r <= kLeftInverseRadius && !beta; ++r) {
        beta = find_left_inverse(a, r);
        found_at = r;
      }
      if (G->kind() == GroupKind::Finite) {
        FpMat rep = regular_representation(a);
        const bool invertible = rank_of(rep) == rep.rows();
        if (invertible != beta.has_value())
          f.hit("left-inverse search and the regular representation disagree");
        if (!beta && i % 10 == 0) {
          Verdict v;
          v.status = Status::CertifiedNo;
          v.radius = int64_t(kLeftInverseRadius);
          v.witness = Json::object();
          v.witness["kind"] = "singular_regular_representation";
          v.witness["rank"] = rank_of(rep);
          v.witness["rows"] = rep.rows();
          corpus.push_back(make_record(
              "find_left_inverse", suite_params(6, {{"max_radius", kLeftInverseRadius}}), v,
              ring_job(a)));
          ++refuted;
        }
      }
      if (!beta) continue;
      ++found;
      Verdict fv;
      fv.status = Status::CertifiedYes;
      fv.radius = int64_t(found_at);
      fv.witness = Json::object();
      fv.witness["kind"] = "left_inverse";
      fv.witness["ring"] = ring_to_json(*beta);
      corpus.push_back(make_record("find_left_inverse",
                                   suite_params(6, {{"max_radius", kLeftInverseRadius}}), fv,
                                   ring_job(a)));
      Verdict sv = verify_stable_finiteness_instance(a, *beta);
      if (sv.status != Status::CertifiedYes)
        f.hit("a left inverse failed to be a right inverse");
      corpus.push_back(
          make_record("verify_stable_finiteness_instance", suite_params(6), sv, ring_job(a)));
    }
  }
  out.pass = f.count == 0;
  std::ostringstream note;
  if (out.pass)
    note << found << " left inverses all two-sided; " << refuted
         << " singular refutations recorded";
  else
    note << f.msg.str() << " (" << f.count << " failures)";
  out.note = note.str();
  return out;
}

// --- criterion 7: post-surjectivity and pre-injectivity --------------------

void check_pre_post_finite(const CellularAutomaton& ca, uint64_t index, int suite,
                           std::vector<Json>& corpus, Failure& f) {
  const bool inj = !finite_injectivity_witness(ca).has_value();
  const bool surj = !finite_surjectivity_witness(ca).has_value();
  Verdict pre = pre_injectivity(ca, 1);
  Verdict post = post_surjectivity(ca, 1, 1);
  if (pre.status != (inj ? Status::CertifiedYes : Status::CertifiedNo))
    f.hit("pre-injectivity disagrees with injectivity on a finite universe");
  if (post.status != (surj ? Status::CertifiedYes : Status::CertifiedNo))
    f.hit("post-surjectivity disagrees with surjectivity on a finite universe");
  if (index % 500 == 0) {
    corpus.push_back(make_record("pre_injectivity", suite_params(suite), pre, ca_job(ca)));
    corpus.push_back(make_record("post_surjectivity", suite_params(suite), post, ca_job(ca)));
  }
}

SuiteOutcome criterion7(std::vector<Json>& corpus) {
  SuiteOutcome out;
  Failure f;

  CellularAutomaton shift = scalar_z_ca(2, {{1, 1}});
  Verdict shift_post = post_surjectivity(shift, 1, 1);
  if (shift_post.status != Status::CertifiedYes || shift_post.radius != 1)
    f.hit("the shift is not certified post-surjective at radius 1");
  corpus.push_back(make_record("post_surjectivity", suite_params(7), shift_post, ca_job(shift)));

  CellularAutomaton onepx = scalar_z_ca(2, {{0, 1}, {1, 1}});
  Verdict onepx_post = post_surjectivity(onepx, 1, 1);
  if (onepx_post.status != Status::CertifiedNo ||
      onepx_post.witness.value("kind", std::string()) != "laurent_unit")
    f.hit("1+x should be refuted post-surjective through the unit test");
  corpus.push_back(make_record("post_surjectivity", suite_params(7), onepx_post, ca_job(onepx)));
  Verdict onepx_pre = pre_injectivity(onepx, 2);
  if (onepx_pre.status != Status::CertifiedYes ||
      onepx_pre.witness.value("kind", std::string()) != "laurent_domain")
    f.hit("1+x should be certified pre-injective through the domain argument");
  corpus.push_back(make_record("pre_injectivity", suite_params(7), onepx_pre, ca_job(onepx)));

  uint64_t rules = 0;
  // every table rule on memory {0,1}, alphabet sizes 2 and 3
  for (uint32_t asize : {2u, 3u}) {
    AlphabetPtr A = Alphabet::plain(asize);
    const uint32_t qmax = asize == 2 ? 6 : 4;  // keeps |A|^|G| <= 2^12
    for (uint32_t q = 2; q <= qmax; ++q) {
      GroupPtr G = GroupUniverse::cyclic(q);
      FiniteSubset M =
          FiniteSubset::of(G, {G->element_of_index(0), G->element_of_index(1)});
      std::vector<uint32_t> table(asize * asize, 0);
      const uint64_t total = [&] {
        uint64_t t = 1;
        for (size_t k = 0; k < table.size(); ++k) t *= asize;
        return t;
      }();
      for (uint64_t idx = 0; idx < total; ++idx) {
        uint64_t x = idx;
        for (auto& v : table) {
          v = uint32_t(x % asize);
          x /= asize;
        }
        check_pre_post_finite(make_ca(G, make_table_rule(A, M, table)), rules++, 7, corpus, f);
      }
    }
  }
  // every linear rule on memory {0,1} over F_2^2
  {
    AlphabetPtr A = Alphabet::vector_space(2, 2);
    auto mat_of = [](uint32_t bits) {
      FpMat m(2, 2, 2);
      for (uint32_t k = 0; k < 4; ++k) m.set(k / 2, k % 2, (bits >> k) & 1);
      return m;
    };
    for (uint32_t q = 2; q <= 6; ++q) {
      GroupPtr G = GroupUniverse::cyclic(q);
      FiniteSubset M =
          FiniteSubset::of(G, {G->element_of_index(0), G->element_of_index(1)});
      for (uint32_t bits = 0; bits < 256; ++bits)
        check_pre_post_finite(
            make_ca(G, make_linear_rule(A, M, {mat_of(bits & 15), mat_of(bits >> 4)})),
            rules++, 7, corpus, f);
    }
  }
  out.pass = f.count == 0;
  std::ostringstream note;
  if (out.pass)
    note << "scalar oracles on the named rules; " << rules
         << " finite rules with matching verdict pairs";
  else
    note << f.msg.str() << " (" << f.count << " failures)";
  out.note = note.str();
  return out;
}

// --- criterion 8: restriction to the subgroup generated by the memory ------

SuiteOutcome criterion8(std::vector<Json>& corpus) {
  std::mt19937_64 rng(1008);
  SuiteOutcome out;
  Failure f;
  std::vector<GroupPtr> pool = {GroupUniverse::cyclic(4),   GroupUniverse::cyclic(6),
                                GroupUniverse::cyclic(8),   GroupUniverse::cyclic(9),
                                GroupUniverse::dihedral(4), GroupUniverse::symmetric(3)};
  uint64_t accepted = 0, attempts = 0;
  while (accepted < kRestrictionSamples && attempts < 100000) {
    ++attempts;
    const GroupPtr& G = pool[pick(rng, pool.size())];
    std::vector<uint32_t> idx = {uint32_t(pick(rng, G->order()))};
    if (rng() & 1) {
      uint32_t j = uint32_t(pick(rng, G->order()));
      if (j != idx[0]) idx.push_back(j);
    }
    std::sort(idx.begin(), idx.end());
    std::vector<GroupElement> elems;
    for (uint32_t i : idx) elems.push_back(G->element_of_index(i));
    FiniteSubset S = FiniteSubset::of(G, elems);
    SubgroupEmbedding emb = subgroup_generated(G, S);
    if (emb.sub->order() == G->order()) continue;
    AlphabetPtr A = (rng() & 1) && G->order() <= 6 ? Alphabet::plain(3) : Alphabet::plain(2);
    uint64_t tsize = 1;
    for (size_t k = 0; k < S.size(); ++k) tsize *= A->size();
    std::vector<uint32_t> table(tsize);
    for (auto& v : table) v = uint32_t(pick(rng, A->size()));
    CellularAutomaton ca = make_ca(G, make_table_rule(A, S, table));
    CellularAutomaton sub = restrict_to_subgroup(ca, emb);
    const bool inj_g = !finite_injectivity_witness(ca).has_value();
    const bool inj_h = !finite_injectivity_witness(sub).has_value();
    const bool surj_g = !finite_surjectivity_witness(ca).has_value();
    const bool surj_h = !finite_surjectivity_witness(sub).has_value();
    if (inj_g != inj_h) f.hit("injectivity changes under restriction to the memory subgroup");
    if (surj_g != surj_h) f.hit("surjectivity changes under restriction to the memory subgroup");
    for (const CellularAutomaton* t : {&ca, &sub}) {
      corpus.push_back(make_record("refute_injective", suite_params(8),
                                   refute_injective(*t, 1), ca_job(*t)));
      corpus.push_back(make_record("check_surjective_finite", suite_params(8),
                                   check_surjective_finite(*t), ca_job(*t)));
    }
    ++accepted;
  }
  if (accepted < kRestrictionSamples) f.hit("sampler failed to reach the quota");
  out.pass = f.count == 0;
  std::ostringstream note;
  if (out.pass)
    note << accepted << " proper-subgroup instances with matching verdicts";
  else
    note << f.msg.str() << " (" << f.count << " failures)";
  out.note = note.str();
  return out;
}

// --- harness ----------------------------------------------------------------

struct AllResults {
  std::array<SuiteOutcome, 8> suites;
  std::vector<Json> corpus;
};

AllResults run_all() {
  AllResults r;
  auto guarded = [](SuiteOutcome& slot, auto&& fn) {
    try {
      slot = fn();
    } catch (const std::exception& e) {
      slot.pass = false;
      slot.note = std::string("unexpected error: ") + e.what();
    }
  };
  guarded(r.suites[0], [&] { return criterion1(r.corpus); });
  std::vector<LinearSample> samples;
  guarded(r.suites[1], [&] {
    Failure f2;
    samples = sample_linear_z(r.corpus, f2);
    SuiteOutcome out;
    out.pass = f2.count == 0;
    std::ostringstream note;
    if (out.pass)
      note << samples.size() << " random linear rules; certificates, exact oracle, and "
           << "periodic actions consistent";
    else
      note << f2.msg.str() << " (" << f2.count << " failures)";
    out.note = note.str();
    return out;
  });
  guarded(r.suites[2], [&] { return criterion3(samples); });
  guarded(r.suites[3], [&] { return criterion4(samples, r.corpus); });
  guarded(r.suites[4], [&] { return criterion5(r.corpus); });
  guarded(r.suites[5], [&] { return criterion6(r.corpus); });
  guarded(r.suites[6], [&] { return criterion7(r.corpus); });
  guarded(r.suites[7], [&] { return criterion8(r.corpus); });
  return r;
}

}  // namespace

int main() {
  AllResults first = run_all();
  AllResults second = run_all();

  SuiteOutcome nine;
  std::ostringstream note9;
  if (first.corpus.size() != second.corpus.size()) {
    nine.pass = false;
    note9 << "corpus size differs across runs: " << first.corpus.size() << " vs "
          << second.corpus.size();
  } else {
    for (size_t i = 0; i < first.corpus.size() && nine.pass; ++i)
      if (first.corpus[i].dump() != second.corpus[i].dump()) {
        nine.pass = false;
        note9 << "record " << i << " differs across runs";
      }
    if (nine.pass) {
      size_t replayed = 0;
      try {
        for (const Json& rec : first.corpus) {
          replay_record(rec);
          ++replayed;
        }
        note9 << first.corpus.size() << " records byte-identical across two runs; all replayed";
      } catch (const std::exception& e) {
        nine.pass = false;
        note9 << "replay failed at record " << replayed << ": " << e.what();
      }
    }
  }
  nine.note = note9.str();

  bool all = true;
  for (size_t i = 0; i < first.suites.size(); ++i) {
    const SuiteOutcome& s = first.suites[i];
    all = all && s.pass;
    std::cout << "criterion " << (i + 1) << ": " << (s.pass ? "PASS" : "FAIL") << " — "
              << s.note << "\n";
  }
  all = all && nine.pass;
  std::cout << "criterion 9: " << (nine.pass ? "PASS" : "FAIL") << " — " << nine.note << "\n";
  return all ? 0 : 1;
}
