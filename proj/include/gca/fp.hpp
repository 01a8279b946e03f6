#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace gca {

bool is_prime(uint32_t n);

// Multiplicative inverse mod a prime p; a must be nonzero mod p.
uint32_t fp_inv(uint32_t a, uint32_t p);

// Dense matrix over F_p, row major, entries reduced into [0, p).
// All reductions use a fixed pivoting rule (leftmost column, topmost row), so
// every derived object (rank, null space basis, solutions) is deterministic.
class FpMat {
 public:
  FpMat() = default;
  FpMat(uint32_t p, uint32_t rows, uint32_t cols)
      : p_(p), rows_(rows), cols_(cols), a_(size_t(rows) * cols, 0) {}

  static FpMat identity(uint32_t p, uint32_t n);

  uint32_t p() const { return p_; }
  uint32_t rows() const { return rows_; }
  uint32_t cols() const { return cols_; }

  uint32_t at(uint32_t r, uint32_t c) const { return a_[size_t(r) * cols_ + c]; }
  void set(uint32_t r, uint32_t c, uint32_t v) { a_[size_t(r) * cols_ + c] = v % p_; }
  void add_at(uint32_t r, uint32_t c, uint32_t v) {
    auto& x = a_[size_t(r) * cols_ + c];
    x = (x + v) % p_;
  }

  const std::vector<uint32_t>& data() const { return a_; }
  std::vector<uint32_t>& data() { return a_; }

  bool is_zero() const;
  bool operator==(const FpMat& o) const = default;

  FpMat operator*(const FpMat& o) const;
  FpMat operator+(const FpMat& o) const;
  FpMat operator-(const FpMat& o) const;
  FpMat transpose() const;

 private:
  uint32_t p_ = 2;
  uint32_t rows_ = 0;
  uint32_t cols_ = 0;
  std::vector<uint32_t> a_;
};

struct Rref {
  FpMat mat;
  std::vector<uint32_t> pivot_cols;
  uint32_t rank = 0;
};

Rref rref(FpMat m);
uint32_t rank_of(const FpMat& m);

// Basis of {x : Mx = 0}; one vector per free column, deterministic order.
std::vector<std::vector<uint32_t>> nullspace(const FpMat& m);

bool solvable(const FpMat& a, std::span<const uint32_t> b);

// Particular solution of Ax = b with all free variables set to zero.
std::optional<std::vector<uint32_t>> solve_particular(const FpMat& a,
                                                      std::span<const uint32_t> b);

// Lexicographically least solution of Ax = b (coordinates compared in index
// order, values in 0..p-1). Greedy: fixes each coordinate to the smallest
// value that keeps the residual system consistent.
std::optional<std::vector<uint32_t>> solve_lex_min(const FpMat& a,
                                                   std::span<const uint32_t> b);

std::optional<FpMat> inverse(const FpMat& m);

// Lexicographically least x with Mx = 0 that is nonzero somewhere on the
// coordinate set `block` (all coordinates if `block` is empty).
std::optional<std::vector<uint32_t>> lex_min_kernel_vector(
    const FpMat& m, std::span<const uint32_t> block);

// Lexicographically least z (length = m.rows()) outside the column space.
std::optional<std::vector<uint32_t>> lex_min_outside_colspace(const FpMat& m);

}  // namespace gca
