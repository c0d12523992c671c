#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "bist/gf2poly.hpp"

namespace bist {

// One k-bit parallel response word.  Bit j-1 feeds MISR tap D_j.
struct ResponseWord {
  std::uint32_t bits = 0;

  friend bool operator==(const ResponseWord&, const ResponseWord&) = default;
};

// State of a k-stage internal-XOR (Galois) multiple-input signature
// register compacting against P(x) = 1 + c_1 x + ... + c_k x^k.  Bit i-1 of
// `bits` is stage r_i, which is also the coefficient of x^{i-1} in the state
// polynomial s(x) = r_k x^{k-1} + ... + r_2 x + r_1 -- the integer IS the
// polynomial mask.
struct MisrState {
  std::uint32_t bits = 0;
  Gf2Poly poly;

  int width() const { return poly.degree().value_or(0); }

  friend bool operator==(const MisrState&, const MisrState&) = default;
};

// All-zero register.  P must have constant term 1 and degree 2..32 (a
// single-stage register is a parity bit, not a signature).
MisrState misr_init(const Gf2Poly& p_poly);

// One clock:
//   fb       = r_k
//   r'_1     = fb ^ D_1
//   r'_{j+1} = r_j ^ (fb & c_j) ^ D_{j+1}    for j = 1..k-1
// which is exactly s(x) <- (s(x) * x mod P(x)) + d(x) for the input
// polynomial d(x) = D_k x^{k-1} + ... + D_1.  The word must fit in k bits.
MisrState misr_step(const MisrState& state, const ResponseWord& word);

// Folds the words in arrival order starting from `init` (default: zero
// register).  An empty sequence returns the initial state unchanged.
MisrState misr_signature(const Gf2Poly& p_poly, std::span<const ResponseWord> words,
                         std::optional<MisrState> init = std::nullopt);

// Single-input reference: the signature of a serial stream on D_1 equals
// D(x) mod P(x) where the first-fed bit is the coefficient of x^{L-1}.
// Computed via poly_divrem, independent of misr_step; stream length 1..64.
Gf2Poly sisr_mod_oracle(const Gf2Poly& p_poly, std::span<const std::uint8_t> bit_stream);

// Rebuilds the dividend QO(x) * P(x) + s(x) from the quotient bits (most
// significant first; may be empty) and the remainder, which must have
// degree below deg P.
Gf2Poly reconstruct_from_quotient(const Gf2Poly& p_poly, std::span<const std::uint8_t> quotient_bits,
                                  const Gf2Poly& remainder);

// "r_k ... r_1" rendering and zero-padded hex (ceil(k/4) digits, no prefix).
std::string to_binary_string(const MisrState& state);
std::string to_hex_string(const MisrState& state);

}  // namespace bist
