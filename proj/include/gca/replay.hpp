#pragma once

#include "gca/deciders.hpp"
#include "gca/serial.hpp"

namespace gca {

// Re-checks one certificate record against its embedded job. Witness and
// transcript evidence is verified by bounded recomputation (evaluating
// patterns, multiplying rings, solving the claimed window systems); no
// radius escalation or fresh search is ever performed. Records with status
// "unknown" carry no claim and are confirmed vacuously.
//
// Throws Error("ReplayFailed") when the claimed evidence does not hold and
// Error("MalformedConfig") when the record cannot be parsed.
void replay_record(const Json& record, uint64_t cap = kDefaultCap,
                   uint64_t budget = kDefaultSearchBudget);

}  // namespace gca
