#pragma once

#include <cstdint>
#include <vector>

namespace gca {

struct Exact1dResult {
  bool injective = false;
  bool surjective = false;
  // dependence hull of the rule inside the given window, after padding to
  // width >= 2; offset is relative to the window start
  uint32_t hull_offset = 0;
  uint32_t hull_width = 0;
};

// Ground-truth decision procedure for automata on Z with a contiguous window
// of `width` cells and a dense rule table (most significant cell first).
// Injectivity: bidirectional trimming of the de Bruijn pair graph leaves only
// diagonal nodes. Surjectivity: no non-diagonal pair node lies on a path from
// the diagonal back to the diagonal. Both run on the dependence hull of the
// table; pair-node count is bounded by `cap`.
Exact1dResult exact_1d(uint32_t q, uint32_t width, const std::vector<uint32_t>& table,
                       uint64_t cap = uint64_t(1) << 26);

}  // namespace gca
