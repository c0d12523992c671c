#include "bist/misr.hpp"

#include "bist/errors.hpp"

namespace bist {

namespace {

int checked_misr_degree(const Gf2Poly& p, const char* who) {
  if (!satisfies_char_constraint(p))
    throw DomainError(std::string(who) + ": P needs constant term 1 and degree >= 1, got " +
                      to_caret_string(p));
  int k = *p.degree();
  if (k < 2)
    throw DomainError(std::string(who) + ": degree-1 register is a parity bit; degree >= 2 required");
  if (k > 32) throw DomainError(std::string(who) + ": degree " + std::to_string(k) + " exceeds 32");
  return k;
}

}  // namespace

MisrState misr_init(const Gf2Poly& p_poly) {
  checked_misr_degree(p_poly, "misr_init");
  return MisrState{0, p_poly};
}

MisrState misr_step(const MisrState& state, const ResponseWord& word) {
  int k = checked_misr_degree(state.poly, "misr_step");
  if (k < 32 && (word.bits >> k) != 0)
    throw DomainError("misr_step: response word wider than the " + std::to_string(k) +
                      "-stage register");
  std::uint32_t fb = state.bits >> (k - 1) & 1;
  std::uint32_t pmask = static_cast<std::uint32_t>(state.poly.mask);
  std::uint32_t next = (state.bits << 1) ^ (fb ? pmask : 0u) ^ word.bits;
  next &= (k < 32) ? ((1u << k) - 1) : ~0u;
  return MisrState{next, state.poly};
}

MisrState misr_signature(const Gf2Poly& p_poly, std::span<const ResponseWord> words,
                         std::optional<MisrState> init) {
  MisrState s = init ? *init : misr_init(p_poly);
  if (init) {
    checked_misr_degree(p_poly, "misr_signature");
    if (s.poly != p_poly)
      throw DomainError("misr_signature: initial state belongs to a different polynomial");
  }
  for (const ResponseWord& w : words) s = misr_step(s, w);
  return s;
}

Gf2Poly sisr_mod_oracle(const Gf2Poly& p_poly, std::span<const std::uint8_t> bit_stream) {
  if (bit_stream.empty() || bit_stream.size() > 64)
    throw DomainError("sisr_mod_oracle: stream length must be 1..64, got " +
                      std::to_string(bit_stream.size()));
  std::uint64_t d = 0;
  std::size_t len = bit_stream.size();
  for (std::size_t i = 0; i < len; ++i)
    if (bit_stream[i] & 1) d |= 1ull << (len - 1 - i);
  return poly_divrem(Gf2Poly{d}, p_poly).remainder;
}

Gf2Poly reconstruct_from_quotient(const Gf2Poly& p_poly, std::span<const std::uint8_t> quotient_bits,
                                  const Gf2Poly& remainder) {
  if (p_poly.is_zero()) throw DomainError("reconstruct_from_quotient: zero modulus");
  if (!remainder.is_zero() && *remainder.degree() >= *p_poly.degree())
    throw DomainError("reconstruct_from_quotient: remainder degree must be below deg P");
  if (quotient_bits.size() > 64)
    throw DomainError("reconstruct_from_quotient: quotient stream longer than 64 bits");
  std::uint64_t q = 0;
  std::size_t len = quotient_bits.size();
  for (std::size_t i = 0; i < len; ++i)
    if (quotient_bits[i] & 1) q |= 1ull << (len - 1 - i);
  return poly_add(poly_mul(Gf2Poly{q}, p_poly), remainder);
}

std::string to_binary_string(const MisrState& state) {
  int k = state.width();
  std::string out(k, '0');
  for (int i = 0; i < k; ++i)
    if (state.bits >> i & 1) out[k - 1 - i] = '1';
  return out;
}

std::string to_hex_string(const MisrState& state) {
  static const char* digits = "0123456789abcdef";
  int k = state.width();
  int nibbles = (k + 3) / 4;
  std::string out(nibbles, '0');
  for (int i = 0; i < nibbles; ++i)
    out[nibbles - 1 - i] = digits[state.bits >> (4 * i) & 0xf];
  return out;
}

}  // namespace bist
