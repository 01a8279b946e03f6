#pragma once

#include <optional>
#include <string>

#include "gca/ca.hpp"
#include "gca/group_ring.hpp"
#include "gca/verdict.hpp"

namespace gca {

// JSON forms are bit-exact: canonical element order everywhere, matrices as
// flat row-major arrays, pattern tables in pattern-index order.

Json universe_to_json(const GroupPtr& G);
GroupPtr universe_from_json(const Json& j);

Json alphabet_to_json(const AlphabetPtr& A);
AlphabetPtr alphabet_from_json(const Json& j);

Json element_to_json(const GroupElement& e);
GroupElement element_from_json(const Json& j);

Json subset_to_json(const FiniteSubset& S);
FiniteSubset subset_from_json(const GroupPtr& G, const Json& j);

Json pattern_to_json(const Pattern& pat);
Pattern pattern_from_json(const GroupPtr& G, const Json& j);

Json rule_to_json(const LocalRule& r);
LocalRule rule_from_json(const GroupPtr& G, const AlphabetPtr& A, const Json& j);

Json ring_to_json(const GroupRingMatrix& a);
GroupRingMatrix ring_from_json(const GroupPtr& G, const Json& j);

Json verdict_to_json(const Verdict& v);
Verdict verdict_from_json(const Json& j);

// One certificate line: {decider, parameters, status, radius, witness,
// transcript, job, tool_version, duration_ms?}. duration is appended last so
// everything before it is byte-identical across runs.
Json make_record(const std::string& decider, const Json& parameters,
                 const Verdict& v, const Json& job_echo,
                 std::optional<int64_t> duration_ms = std::nullopt);

// Parsed job document. `raw` echoes the input verbatim into records.
struct JobConfig {
  Json raw;
  GroupPtr universe;
  AlphabetPtr alphabet;                      // present for CA jobs
  std::optional<CellularAutomaton> ca;       // universe + alphabet + rule
  std::optional<FiniteSubset> memory;        // bare memory, for rule sweeps
  std::optional<GroupRingMatrix> ring;       // ring jobs
  std::optional<GroupRingMatrix> ring_left;  // explicit left factor, if any
};

// Strict: unknown keys anywhere in the document are MalformedConfig.
JobConfig job_from_json(const Json& j);

// MalformedConfig unless j is an object whose keys all appear in `allowed`.
void require_keys(const Json& j, std::initializer_list<const char*> allowed);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace gca
