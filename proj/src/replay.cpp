#include "gca/replay.hpp"

#include <string>
#include <vector>

#include "gca/exact1d.hpp"
#include "gca/group_ring.hpp"

namespace gca {
namespace {

[[noreturn]] void fail(const std::string& what) { throw Error("ReplayFailed", what); }

void expect(bool ok, const std::string& what) {
  if (!ok) fail(what);
}

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw Error("MalformedConfig", std::string("record is missing '") + key + "'");
  return j.at(key);
}

std::string kind_of(const Json& witness) {
  const Json& k = need(witness, "kind");
  if (!k.is_string()) throw Error("MalformedConfig", "witness kind must be a string");
  return k.get<std::string>();
}

bool next_pattern(std::vector<uint32_t>& v, uint32_t q) {
  for (size_t i = v.size(); i-- > 0;) {
    if (++v[i] < q) return true;
    v[i] = 0;
  }
  return false;
}

FiniteSubset padded_window(const CellularAutomaton& ca, const Pattern& p) {
  FiniteSubset base =
      union_set(p.window, FiniteSubset::of(ca.universe, {ca.universe->identity()}));
  return product_set(base, ca.rule.memory);
}

// A configuration equal to `p` on its window and neutral elsewhere must be
// nonzero and map to the neutral configuration.
void check_kernel_config(const CellularAutomaton& ca, const Json& witness, uint64_t cap) {
  expect(classify(ca, cap) != CAClass::Plain, "kernel elements need a group or linear rule");
  Pattern p = pattern_from_json(ca.universe, need(witness, "pattern"));
  bool nonzero = false;
  for (uint32_t v : p.values) nonzero = nonzero || v != ca.alphabet->neutral();
  expect(nonzero, "claimed kernel element is the neutral configuration");
  FiniteSubset probe = padded_window(ca, p);
  std::vector<uint32_t> image = evaluate_padded(ca, p, probe);
  for (uint32_t v : image) expect(v == ca.alphabet->neutral(), "claimed kernel element has a nonzero image");
}

void check_colliding_pair(const CellularAutomaton& ca, const Json& witness) {
  expect(ca.universe->kind() == GroupKind::Finite, "collision witnesses need a finite universe");
  Pattern first = pattern_from_json(ca.universe, need(witness, "first"));
  Pattern second = pattern_from_json(ca.universe, need(witness, "second"));
  Pattern image = pattern_from_json(ca.universe, need(witness, "image"));
  const size_t order = ca.universe->order();
  expect(first.window.size() == order && second.window.size() == order &&
             image.window.size() == order,
         "collision witnesses must cover the whole universe");
  expect(first.values != second.values, "colliding configurations must differ");
  WindowMap wm = window_map(ca, first.window);
  expect(wm.apply(first.values) == image.values && wm.apply(second.values) == image.values,
         "claimed collision does not collide");
}

void check_orphan(const CellularAutomaton& ca, const Json& witness, uint64_t cap) {
  Pattern z = pattern_from_json(ca.universe, need(witness, "pattern"));
  FiniteSubset source = product_set(z.window, ca.rule.memory);
  std::optional<LocalRule> lin;
  if (ca.alphabet->kind() == AlphabetKind::VectorSpace) lin = as_linear_rule(ca.rule, cap);
  if (lin) {
    CellularAutomaton lca{ca.universe, ca.alphabet, std::move(*lin)};
    FpMat w = linear_window_system(lca, source, z.window);
    std::vector<uint32_t> rhs;
    rhs.reserve(z.values.size() * ca.alphabet->dim());
    for (uint32_t letter : z.values) {
      std::vector<uint32_t> v = ca.alphabet->vec_of(letter);
      rhs.insert(rhs.end(), v.begin(), v.end());
    }
    expect(!solvable(w, rhs), "claimed orphan has a window preimage");
    return;
  }
  WindowMap wm = window_map(ca, z.window);
  pattern_count(ca.alphabet->size(), wm.source.size(), cap);
  std::vector<uint32_t> x(wm.source.size(), 0);
  do {
    if (wm.apply(x) == z.values) fail("claimed orphan has a window preimage");
  } while (next_pattern(x, static_cast<uint32_t>(ca.alphabet->size())));
}

void check_injectivity_refutation(const CellularAutomaton& ca, const Json& witness,
                                  uint64_t cap) {
  std::string kind = kind_of(witness);
  if (kind == "kernel_element") {
    check_kernel_config(ca, witness, cap);
  } else if (kind == "colliding_pair") {
    check_colliding_pair(ca, witness);
  } else if (kind == "periodic_collision") {
    const Json& lat = need(witness, "lattice");
    if (!lat.is_array()) throw Error("MalformedConfig", "lattice basis must be an array");
    std::vector<std::vector<int64_t>> basis;
    for (const Json& row : lat) basis.push_back(row.get<std::vector<int64_t>>());
    PeriodicAction pa = periodic_action(ca, basis, cap);
    check_injectivity_refutation(pa.induced, need(witness, "quotient_witness"), cap);
  } else {
    fail("unrecognized injectivity refutation '" + kind + "'");
  }
}

void check_deviation_preimages(const CellularAutomaton& ca, const Json& witness) {
  const Json& entries = need(witness, "preimages");
  if (!entries.is_array()) throw Error("MalformedConfig", "preimages must be an array");
  const uint32_t neutral = ca.alphabet->neutral();
  std::vector<bool> covered(ca.alphabet->size(), false);
  for (const Json& entry : entries) {
    uint32_t letter = need(entry, "letter").get<uint32_t>();
    expect(letter < ca.alphabet->size() && letter != neutral,
           "deviation letter out of range");
    Pattern p = pattern_from_json(ca.universe, need(entry, "pattern"));
    FiniteSubset probe = padded_window(ca, p);
    std::vector<uint32_t> image = evaluate_padded(ca, p, probe);
    size_t at_identity = *probe.index_of(ca.universe->identity());
    for (size_t i = 0; i < image.size(); ++i) {
      uint32_t want = i == at_identity ? letter : neutral;
      expect(image[i] == want, "claimed preimage does not realize its deviation");
    }
    covered[letter] = true;
  }
  for (uint32_t a = 0; a < ca.alphabet->size(); ++a)
    expect(a == neutral || covered[a], "a deviation letter has no preimage");
}

size_t scalar_support_size(const CellularAutomaton& ca, uint64_t cap) {
  expect(ca.universe->kind() == GroupKind::FreeAbelian &&
             ca.alphabet->kind() == AlphabetKind::VectorSpace && ca.alphabet->dim() == 1,
         "oracle claims need a scalar rule over a free abelian universe");
  std::optional<LocalRule> lin = as_linear_rule(ca.rule, cap);
  expect(lin.has_value(), "oracle claims need a linear rule");
  size_t support = 0;
  for (const FpMat& m : lin->mats)
    if (m.at(0, 0) != 0) ++support;
  return support;
}

const CellularAutomaton& need_ca(const JobConfig& job) {
  if (!job.ca) throw Error("MalformedConfig", "record's job carries no rule");
  return *job.ca;
}

const GroupRingMatrix& need_ring(const JobConfig& job) {
  if (!job.ring) throw Error("MalformedConfig", "record's job carries no ring element");
  return *job.ring;
}

void check_flagged_rules(const JobConfig& job, const Json& report, uint64_t cap) {
  const Json& flagged = need(report, "flagged");
  if (!flagged.is_array()) throw Error("MalformedConfig", "flagged must be an array");
  expect(need(report, "violations").get<uint64_t>() == flagged.size(),
         "violation count disagrees with the flagged list");
  for (const Json& entry : flagged) {
    LocalRule rule = rule_from_json(job.universe, job.alphabet, need(entry, "rule"));
    CellularAutomaton ca = make_ca(job.universe, std::move(rule));
    bool injective, surjective;
    if (ca.universe->kind() == GroupKind::Finite) {
      injective = !finite_injectivity_witness(ca, cap).has_value();
      surjective = !finite_surjectivity_witness(ca, cap).has_value();
    } else {
      Exact1dResult r = exact_1d_oracle(ca, cap);
      injective = r.injective;
      surjective = r.surjective;
    }
    expect(injective && !surjective, "flagged rule is not a surjunctivity violation");
  }
}

}  // namespace

void replay_record(const Json& record, uint64_t cap, uint64_t budget) {
  require_keys(record, {"tool_version", "decider", "parameters", "status", "radius",
                        "witness", "transcript", "job", "duration_ms"});
  const Json& dj = need(record, "decider");
  if (!dj.is_string()) throw Error("MalformedConfig", "decider must be a string");
  const std::string decider = dj.get<std::string>();
  const Status status = status_from_string(need(record, "status").get<std::string>());
  const Json& witness = need(record, "witness");
  JobConfig job = job_from_json(need(record, "job"));

  if (decider == "certify_injective") {
    if (status == Status::Unknown) return;
    expect(status == Status::CertifiedYes, "certify_injective cannot certify a no");
    uint32_t n = need(witness, "n").get<uint32_t>();
    KernelWindowReport rep = kernel_window(need_ca(job), n, budget);
    expect(rep.empty, "claimed empty kernel window is inhabited");
    return;
  }
  if (decider == "refute_injective") {
    if (status == Status::Unknown) return;
    expect(status == Status::CertifiedNo, "refute_injective cannot certify a yes");
    check_injectivity_refutation(need_ca(job), witness, cap);
    return;
  }
  if (decider == "check_surjective_finite" || decider == "goe_search") {
    if (status == Status::Unknown) return;
    if (status == Status::CertifiedNo) {
      check_orphan(need_ca(job), witness, cap);
      return;
    }
    expect(decider == "check_surjective_finite", "goe_search cannot certify a yes");
    expect(!finite_surjectivity_witness(need_ca(job), cap).has_value(),
           "claimed surjective rule has an orphan");
    return;
  }
  if (decider == "synthesize_inverse") {
    if (status == Status::Unknown) return;
    expect(status == Status::CertifiedYes, "synthesize_inverse cannot certify a no");
    const CellularAutomaton& ca = need_ca(job);
    LocalRule rule = rule_from_json(ca.universe, ca.alphabet, need(witness, "rule"));
    CellularAutomaton sigma = make_ca(ca.universe, std::move(rule));
    expect(is_identity_ca(compose(sigma, ca, cap), cap) &&
               is_identity_ca(compose(ca, sigma, cap), cap),
           "claimed inverse does not invert");
    return;
  }
  if (decider == "pre_injectivity") {
    if (status == Status::Unknown) return;
    const CellularAutomaton& ca = need_ca(job);
    if (status == Status::CertifiedNo) {
      check_injectivity_refutation(ca, witness, cap);
      return;
    }
    if (ca.universe->kind() == GroupKind::Finite) {
      expect(!finite_injectivity_witness(ca, cap, budget).has_value(),
             "claimed injective rule has a collision");
      return;
    }
    expect(kind_of(witness) == "laurent_domain", "unrecognized pre-injectivity witness");
    size_t support = scalar_support_size(ca, cap);
    expect(support == need(witness, "support_size").get<size_t>() && support > 0,
           "claimed nonzero scalar rule is zero");
    return;
  }
  if (decider == "post_surjectivity") {
    if (status == Status::Unknown) return;
    const CellularAutomaton& ca = need_ca(job);
    if (ca.universe->kind() == GroupKind::Finite) {
      if (status == Status::CertifiedNo) {
        check_orphan(ca, witness, cap);
      } else {
        expect(!finite_surjectivity_witness(ca, cap).has_value(),
               "claimed surjective rule has an orphan");
      }
      return;
    }
    if (status == Status::CertifiedNo) {
      expect(kind_of(witness) == "laurent_unit", "unrecognized post-surjectivity witness");
      size_t support = scalar_support_size(ca, cap);
      expect(support == need(witness, "support_size").get<size_t>() && support != 1,
             "claimed non-unit scalar rule is a monomial");
      return;
    }
    if (kind_of(witness) == "laurent_unit") {
      expect(scalar_support_size(ca, cap) == 1, "claimed monomial rule is not a monomial");
      return;
    }
    check_deviation_preimages(ca, witness);
    return;
  }
  if (decider == "exact_1d") {
    Exact1dResult r = exact_1d_oracle(need_ca(job), cap);
    expect(need(witness, "injective").get<bool>() == r.injective &&
               need(witness, "surjective").get<bool>() == r.surjective &&
               need(witness, "hull_offset").get<uint32_t>() == r.hull_offset &&
               need(witness, "hull_width").get<uint32_t>() == r.hull_width,
           "recomputed exact answers disagree with the record");
    return;
  }
  if (decider == "surjunctivity_sweep") {
    check_flagged_rules(job, witness, cap);
    bool clean = need(witness, "violations").get<uint64_t>() == 0;
    expect(status == (clean ? Status::CertifiedYes : Status::CertifiedNo),
           "sweep status disagrees with its violation count");
    return;
  }
  if (decider == "find_left_inverse") {
    if (status == Status::Unknown) return;
    const GroupRingMatrix& alpha = need_ring(job);
    if (status == Status::CertifiedNo) {
      expect(alpha.G->kind() == GroupKind::Finite, "a refutation needs a finite universe");
      FpMat rep = regular_representation(alpha);
      expect(rank_of(rep) < rep.rows(), "regular representation is invertible");
      return;
    }
    GroupRingMatrix beta = ring_from_json(alpha.G, need(witness, "ring"));
    expect(gr_equal(gr_mul(beta, alpha), gr_unit(alpha.G, alpha.p, alpha.n)),
           "claimed left inverse is not a left inverse");
    return;
  }
  if (decider == "verify_stable_finiteness_instance") {
    if (status == Status::Unknown) return;
    const GroupRingMatrix& alpha = need_ring(job);
    GroupRingMatrix beta = ring_from_json(alpha.G, need(witness, "left_inverse"));
    GroupRingMatrix unit = gr_unit(alpha.G, alpha.p, alpha.n);
    expect(gr_equal(gr_mul(beta, alpha), unit),
           "recorded left factor is not a left inverse");
    GroupRingMatrix ab = gr_mul(alpha, beta);
    if (status == Status::CertifiedYes) {
      expect(gr_equal(ab, unit), "claimed two-sided unit has a defect");
      return;
    }
    GroupRingMatrix defect = ring_from_json(alpha.G, need(witness, "ring"));
    expect(!defect.support.empty() && gr_equal(gr_sub(ab, unit), defect),
           "recorded defect disagrees with the recomputed product");
    return;
  }
  if (decider == "phi") {
    const GroupRingMatrix& alpha = need_ring(job);
    CellularAutomaton ca = phi(alpha);
    expect(rule_to_json(ca.rule) == need(witness, "rule"),
           "recomputed automaton disagrees with the record");
    return;
  }
  throw Error("MalformedConfig", "unrecognized decider '" + decider + "'");
}

}  // namespace gca
