#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocf {

/// Exact arithmetic in GF(p^k), q = p^k <= 64.
///
/// Elements are encoded as integers in [0,q): the base-p digits of the
/// encoding are the coefficients (little-endian) of the residue polynomial
/// modulo the field's irreducible modulus.  All operations go through
/// precomputed tables, so they are exact and cheap.
class FieldCtx {
public:
  static constexpr int kMaxQ = 64;

  FieldCtx(int p, int k);

  int p() const { return p_; }
  int k() const { return k_; }
  int q() const { return q_; }

  /// Modulus coefficients, little-endian, degree k (monic).  For k == 1 the
  /// modulus is x - c with the prime field convention c = 0.
  const std::vector<int>& modulus() const { return modulus_; }
  std::string modulus_string() const;

  uint8_t add(uint8_t a, uint8_t b) const { return add_[idx(a, b)]; }
  uint8_t sub(uint8_t a, uint8_t b) const { return sub_[idx(a, b)]; }
  uint8_t mul(uint8_t a, uint8_t b) const { return mul_[idx(a, b)]; }
  uint8_t neg(uint8_t a) const { return neg_[a]; }
  uint8_t inv(uint8_t a) const;
  uint8_t div(uint8_t a, uint8_t b) const { return mul(a, inv(b)); }
  uint8_t pow(uint8_t a, long long n) const;

  /// Unique square root in characteristic 2 (Frobenius inverse).
  uint8_t sqrt_char2(uint8_t a) const;

  /// Absolute trace x + x^p + ... + x^{p^{k-1}}; prime-subfield valued.
  uint8_t trace(uint8_t a) const { return trace_[a]; }

  /// Frobenius x -> x^p.
  uint8_t frob(uint8_t a) const { return frob_[a]; }

  bool is_square(uint8_t a) const;

private:
  static size_t idx(uint8_t a, uint8_t b) { return size_t(a) * kMaxQ + b; }

  int p_, k_, q_;
  std::vector<int> modulus_;
  std::vector<uint8_t> add_, sub_, mul_, inv_, neg_, frob_, trace_, sqrt_;
};

/// Builds (and caches) the context for GF(p^k) with the lexicographically
/// smallest irreducible monic modulus.  Throws on non-prime p or p^k > 64.
const FieldCtx* make_field(int p, int k);

}  // namespace ocf
