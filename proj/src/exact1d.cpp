#include "gca/exact1d.hpp"

#include <cstddef>

#include "gca/error.hpp"

namespace gca {
namespace {

uint64_t pow_or_throw(uint32_t q, uint32_t e, uint64_t limit, const char* what) {
  uint64_t n = 1;
  for (uint32_t i = 0; i < e; ++i) {
    if (q != 0 && n > limit / q) fail("CapExceeded", what);
    n *= q;
  }
  return n;
}

// Pair-graph peeling. Nodes are (q-ary words of length W-1) squared; a pair
// survives iff it lies on a bi-infinite label-matched path. The automaton is
// injective iff every survivor is diagonal: a non-diagonal survivor yields two
// distinct configurations with the same image, and conversely.
template <typename Deg>
bool trim_leaves_diagonal_only(uint32_t q, uint64_t N,
                               const std::vector<uint32_t>& out_off,
                               const std::vector<uint32_t>& out_sym,
                               const std::vector<uint32_t>& in_off,
                               const std::vector<uint32_t>& in_pred,
                               const std::vector<uint8_t>& co,
                               const std::vector<uint8_t>& ci) {
  const uint64_t P = N * N;
  std::vector<Deg> deg_out(P), deg_in(P);
  std::vector<bool> alive(P, true);
  std::vector<uint32_t> stack;

  for (uint64_t v1 = 0; v1 < N; ++v1) {
    const uint8_t* co1 = &co[v1 * q];
    const uint8_t* ci1 = &ci[v1 * q];
    for (uint64_t v2 = 0; v2 < N; ++v2) {
      const uint8_t* co2 = &co[v2 * q];
      const uint8_t* ci2 = &ci[v2 * q];
      uint32_t dout = 0, din = 0;
      for (uint32_t l = 0; l < q; ++l) {
        dout += uint32_t(co1[l]) * co2[l];
        din += uint32_t(ci1[l]) * ci2[l];
      }
      const uint64_t p = v1 * N + v2;
      deg_out[p] = Deg(dout);
      deg_in[p] = Deg(din);
      if (dout == 0 || din == 0) {
        alive[p] = false;
        stack.push_back(uint32_t(p));
      }
    }
  }

  while (!stack.empty()) {
    const uint64_t p = stack.back();
    stack.pop_back();
    const uint64_t v1 = p / N, v2 = p % N;
    // successors lose an incoming edge
    for (uint32_t l = 0; l < q; ++l) {
      for (uint32_t i1 = out_off[v1 * q + l]; i1 < out_off[v1 * q + l + 1]; ++i1) {
        const uint64_t s1 = (v1 * q + out_sym[i1]) % N;
        for (uint32_t i2 = out_off[v2 * q + l]; i2 < out_off[v2 * q + l + 1]; ++i2) {
          const uint64_t s2 = (v2 * q + out_sym[i2]) % N;
          const uint64_t np = s1 * N + s2;
          if (!alive[np]) continue;
          if (--deg_in[np] == 0) {
            alive[np] = false;
            stack.push_back(uint32_t(np));
          }
        }
      }
      // predecessors lose an outgoing edge
      for (uint32_t i1 = in_off[v1 * q + l]; i1 < in_off[v1 * q + l + 1]; ++i1) {
        const uint64_t u1 = in_pred[i1];
        for (uint32_t i2 = in_off[v2 * q + l]; i2 < in_off[v2 * q + l + 1]; ++i2) {
          const uint64_t np = u1 * N + in_pred[i2];
          if (!alive[np]) continue;
          if (--deg_out[np] == 0) {
            alive[np] = false;
            stack.push_back(uint32_t(np));
          }
        }
      }
    }
  }

  for (uint64_t p = 0; p < P; ++p)
    if (alive[p] && p / N != p % N) return false;
  return true;
}

// Forward reach from the diagonal, backward reach to the diagonal; a
// non-diagonal node in both carries a diamond (two distinct words with equal
// labels, equal prefix and equal suffix), which is exactly a Garden-of-Eden
// obstruction on Z.
bool diamond_free(uint32_t q, uint64_t N,
                  const std::vector<uint32_t>& out_off,
                  const std::vector<uint32_t>& out_sym,
                  const std::vector<uint32_t>& in_off,
                  const std::vector<uint32_t>& in_pred) {
  const uint64_t P = N * N;
  std::vector<bool> fwd(P, false), bwd(P, false);
  std::vector<uint32_t> stack;

  for (uint64_t u = 0; u < N; ++u) {
    fwd[u * N + u] = true;
    stack.push_back(uint32_t(u * N + u));
  }
  while (!stack.empty()) {
    const uint64_t p = stack.back();
    stack.pop_back();
    const uint64_t v1 = p / N, v2 = p % N;
    for (uint32_t l = 0; l < q; ++l)
      for (uint32_t i1 = out_off[v1 * q + l]; i1 < out_off[v1 * q + l + 1]; ++i1) {
        const uint64_t s1 = (v1 * q + out_sym[i1]) % N;
        for (uint32_t i2 = out_off[v2 * q + l]; i2 < out_off[v2 * q + l + 1]; ++i2) {
          const uint64_t np = s1 * N + (v2 * q + out_sym[i2]) % N;
          if (!fwd[np]) {
            fwd[np] = true;
            stack.push_back(uint32_t(np));
          }
        }
      }
  }

  for (uint64_t u = 0; u < N; ++u) {
    bwd[u * N + u] = true;
    stack.push_back(uint32_t(u * N + u));
  }
  while (!stack.empty()) {
    const uint64_t p = stack.back();
    stack.pop_back();
    const uint64_t v1 = p / N, v2 = p % N;
    for (uint32_t l = 0; l < q; ++l)
      for (uint32_t i1 = in_off[v1 * q + l]; i1 < in_off[v1 * q + l + 1]; ++i1) {
        const uint64_t u1 = in_pred[i1];
        for (uint32_t i2 = in_off[v2 * q + l]; i2 < in_off[v2 * q + l + 1]; ++i2) {
          const uint64_t np = u1 * N + in_pred[i2];
          if (bwd[np]) continue;
          bwd[np] = true;
          if (fwd[np] && np / N != np % N) return false;
          stack.push_back(uint32_t(np));
        }
      }
  }
  return true;
}

}  // namespace

Exact1dResult exact_1d(uint32_t q, uint32_t width, const std::vector<uint32_t>& table,
                       uint64_t cap) {
  if (q == 0) fail("DomainMismatch", "empty alphabet");
  if (width > 40) fail("CapExceeded", "window too wide");
  const uint64_t tsize = pow_or_throw(q, width, uint64_t(1) << 32, "rule table too large");
  if (table.size() != tsize)
    fail("DomainMismatch", "table size does not match q^width");
  for (uint32_t v : table)
    if (v >= q) fail("DomainMismatch", "table value outside the alphabet");

  Exact1dResult res;
  if (q == 1) {
    res.injective = res.surjective = true;
    res.hull_width = width;
    return res;
  }

  // dependence hull: position j is live when some pattern changes output
  // under a change of digit j alone
  std::vector<uint32_t> live;
  {
    uint64_t stride = tsize;
    for (uint32_t j = 0; j < width; ++j) {
      stride /= q;
      bool dep = false;
      for (uint64_t w = 0; w < tsize && !dep; ++w) {
        const uint64_t digit = (w / stride) % q;
        if (digit == 0) continue;
        dep = table[w] != table[w - digit * stride];
      }
      if (dep) live.push_back(j);
    }
  }
  if (live.empty()) {
    // constant rule on a non-trivial alphabet: the image is a single point
    res.injective = res.surjective = false;
    res.hull_width = width == 0 ? 0 : 1;
    return res;
  }

  uint32_t lo = live.front(), hi = live.back();
  uint32_t W = hi - lo + 1;
  if (W < 2) {
    // pad with a dead cell so the pair graph has real words as nodes
    lo = hi >= 1 ? hi - 1 : 0;
    W = 2;
  }
  res.hull_offset = lo;
  res.hull_width = W;

  // rule table over the padded hull; digits outside the original window or at
  // dead positions read as zero
  const uint64_t hsize = pow_or_throw(q, W, cap, "hull table above cap");
  std::vector<uint32_t> t(hsize);
  {
    std::vector<uint64_t> place(W, 0);  // contribution stride per hull slot
    uint64_t s = 1;
    for (uint32_t j = width; j-- > 0;) {
      if (j >= lo && j < lo + W) place[j - lo] = s;
      s *= q;
    }
    std::vector<uint32_t> digits(W, 0);
    for (uint64_t idx = 0; idx < hsize; ++idx) {
      uint64_t orig = 0;
      for (uint32_t j = 0; j < W; ++j) orig += digits[j] * place[j];
      t[idx] = table[orig];
      for (uint32_t j = W; j-- > 0;) {
        if (++digits[j] < q) break;
        digits[j] = 0;
      }
    }
  }

  const uint64_t N = pow_or_throw(q, W - 1, cap, "pair graph above cap");
  if (N > cap / N || N * N > (uint64_t(1) << 31))
    fail("CapExceeded", "pair graph above cap");
  const uint64_t P = N * N;
  if (q > 15 && P > (uint64_t(1) << 23))
    fail("CapExceeded", "alphabet too large for a pair graph of this size");

  // label buckets in CSR form: out_sym holds the appended symbol, in_pred the
  // predecessor word of an incoming edge
  std::vector<uint32_t> out_off(N * q + 1, 0), in_off(N * q + 1, 0);
  std::vector<uint32_t> out_sym(N * q), in_pred(N * q);
  std::vector<uint8_t> co(N * q, 0), ci(N * q, 0);
  for (uint64_t v = 0; v < N; ++v)
    for (uint32_t a = 0; a < q; ++a) {
      ++co[v * q + t[v * q + a]];
      const uint64_t w = uint64_t(a) * N + v;  // incoming edge word
      ++ci[v * q + t[w]];
    }
  for (uint64_t i = 0, acc_o = 0, acc_i = 0; i < N * q; ++i) {
    out_off[i] = uint32_t(acc_o);
    in_off[i] = uint32_t(acc_i);
    acc_o += co[i];
    acc_i += ci[i];
  }
  out_off[N * q] = uint32_t(N * q);
  in_off[N * q] = uint32_t(N * q);
  {
    std::vector<uint32_t> fo(out_off.begin(), out_off.end() - 1);
    std::vector<uint32_t> fi(in_off.begin(), in_off.end() - 1);
    for (uint64_t v = 0; v < N; ++v)
      for (uint32_t a = 0; a < q; ++a) {
        out_sym[fo[v * q + t[v * q + a]]++] = a;
        const uint64_t w = uint64_t(a) * N + v;
        in_pred[fi[v * q + t[w]]++] = uint32_t(w / q);
      }
  }

  if (q <= 15)
    res.injective = trim_leaves_diagonal_only<uint8_t>(q, N, out_off, out_sym,
                                                       in_off, in_pred, co, ci);
  else
    res.injective = trim_leaves_diagonal_only<uint16_t>(q, N, out_off, out_sym,
                                                        in_off, in_pred, co, ci);
  res.surjective = diamond_free(q, N, out_off, out_sym, in_off, in_pred);
  return res;
}

}  // namespace gca
