#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bist {

// Polynomial over GF(2), at most degree 63.  Bit j of `mask` is the
// coefficient of x^j, so 1+x+x^3 is 0b1011.  Value type, immutable in
// practice; safe to share across threads.
struct Gf2Poly {
  std::uint64_t mask = 0;

  // Highest set bit, or nullopt for the zero polynomial.
  std::optional<int> degree() const;
  bool is_zero() const { return mask == 0; }

  friend bool operator==(const Gf2Poly&, const Gf2Poly&) = default;
  friend auto operator<=>(const Gf2Poly& a, const Gf2Poly& b) {
    return a.mask <=> b.mask;
  }
};

// Accepts either caret form ("1+x^2+x^5", terms in any order, bare "x"
// means x^1, a repeated term cancels) or a hex mask ("0x25").  Throws
// ParseError with the byte offset of the first bad character, RangeError
// for exponents past 63 or hex masks past 64 bits.
Gf2Poly parse_poly(std::string_view text);

// Caret form with ascending exponents; "0" for the zero polynomial.
// parse_poly(to_caret_string(p)) == p and parse_poly(to_hex_string(p)) == p.
std::string to_caret_string(const Gf2Poly& p);
std::string to_hex_string(const Gf2Poly& p);

Gf2Poly poly_add(const Gf2Poly& a, const Gf2Poly& b);

// Carry-less product; throws RangeError if the result would pass degree 63.
Gf2Poly poly_mul(const Gf2Poly& a, const Gf2Poly& b);

struct DivRem {
  Gf2Poly quotient;
  Gf2Poly remainder;
};

// Schoolbook division; divisor must be nonzero.
DivRem poly_divrem(const Gf2Poly& dividend, const Gf2Poly& divisor);

// a*b mod m without intermediate overflow for deg(m) <= 32.
Gf2Poly poly_mulmod(const Gf2Poly& a, const Gf2Poly& b, const Gf2Poly& m);

// x^exponent mod m.
Gf2Poly x_pow_mod(std::uint64_t exponent, const Gf2Poly& m);

Gf2Poly poly_gcd(Gf2Poly a, Gf2Poly b);

// Feedback-polynomial shape required throughout: nonzero constant term and
// degree >= 1 (the leading coefficient is 1 by representation).
bool satisfies_char_constraint(const Gf2Poly& p);

// Rabin test.  Degree must be 1..32.
bool is_irreducible(const Gf2Poly& p);

// True iff p is irreducible and x has multiplicative order 2^n - 1 modulo p
// (n = degree).  Degree must be 1..32; returns false when the constant term
// is missing.
bool is_primitive(const Gf2Poly& p);

// All primitive polynomials of the given degree (1..24), ascending by mask.
// The count is phi(2^n - 1) / n.
std::vector<Gf2Poly> enumerate_primitive(int degree);

// All polynomials of that degree with constant term 1 (1..24), ascending.
std::vector<Gf2Poly> enumerate_char_polys(int degree);

}  // namespace bist
