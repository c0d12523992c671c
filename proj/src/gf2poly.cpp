#include "bist/gf2poly.hpp"

#include <bit>
#include <cctype>
#include <charconv>

#include "bist/errors.hpp"

namespace bist {

namespace {

// Trial-division factorization, small enough for 2^32 - 1 and friends.
std::vector<std::uint64_t> prime_factors(std::uint64_t m) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t d = 2; d * d <= m; d += (d == 2) ? 1 : 2) {
    if (m % d == 0) {
      primes.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) primes.push_back(m);
  return primes;
}

int degree_or_throw(const Gf2Poly& p, const char* who) {
  auto d = p.degree();
  if (!d) throw DomainError(std::string(who) + ": zero polynomial has no degree");
  return *d;
}

}  // namespace

std::optional<int> Gf2Poly::degree() const {
  if (mask == 0) return std::nullopt;
  return std::bit_width(mask) - 1;
}

Gf2Poly parse_poly(std::string_view text) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size()) throw ParseError("offset 0: empty polynomial", 0);

  // Hex mask form.
  if (text[i] == '0' && i + 1 < text.size() && (text[i + 1] == 'x' || text[i + 1] == 'X')) {
    std::size_t digits = i + 2;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + digits, text.data() + text.size(), value, 16);
    if (ec == std::errc::result_out_of_range)
      throw RangeError("hex mask wider than 64 bits");
    std::size_t end = static_cast<std::size_t>(ptr - text.data());
    if (ec != std::errc() || end == digits)
      throw ParseError("offset " + std::to_string(digits) + ": expected hex digits", digits);
    i = end;
    skip_ws();
    if (i != text.size())
      throw ParseError("offset " + std::to_string(i) + ": trailing characters after hex mask", i);
    return Gf2Poly{value};
  }

  // Caret form: term ( '+' term )*, term = "0" | "1" | "x" | "x^<exp>".
  std::uint64_t mask = 0;
  for (;;) {
    skip_ws();
    std::size_t at = i;
    if (i == text.size())
      throw ParseError("offset " + std::to_string(at) + ": expected term", at);
    char c = text[i];
    if (c == '0' || c == '1') {
      ++i;
      if (c == '1') mask ^= 1;
    } else if (c == 'x') {
      ++i;
      int exp = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::size_t digits = i;
        unsigned long long value = 0;
        auto [ptr, ec] =
            std::from_chars(text.data() + digits, text.data() + text.size(), value, 10);
        std::size_t end = static_cast<std::size_t>(ptr - text.data());
        if ((ec != std::errc() && ec != std::errc::result_out_of_range) || end == digits)
          throw ParseError("offset " + std::to_string(digits) + ": expected exponent digits",
                           digits);
        if (ec == std::errc::result_out_of_range || value > 63)
          throw RangeError("exponent at offset " + std::to_string(digits) +
                           " exceeds the degree-63 limit");
        exp = static_cast<int>(value);
        i = end;
      }
      mask ^= 1ull << exp;
    } else {
      throw ParseError("offset " + std::to_string(at) + ": unexpected character '" +
                           std::string(1, c) + "'",
                       at);
    }
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != '+')
      throw ParseError("offset " + std::to_string(i) + ": expected '+' between terms", i);
    ++i;
  }
  return Gf2Poly{mask};
}

std::string to_caret_string(const Gf2Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int j = 0; j < 64; ++j) {
    if (!(p.mask >> j & 1)) continue;
    if (!out.empty()) out += '+';
    if (j == 0)
      out += '1';
    else if (j == 1)
      out += 'x';
    else
      out += "x^" + std::to_string(j);
  }
  return out;
}

std::string to_hex_string(const Gf2Poly& p) {
  static const char* digits = "0123456789abcdef";
  if (p.is_zero()) return "0x0";
  std::string hex;
  for (std::uint64_t m = p.mask; m; m >>= 4) hex.insert(hex.begin(), digits[m & 0xf]);
  return "0x" + hex;
}

Gf2Poly poly_add(const Gf2Poly& a, const Gf2Poly& b) { return Gf2Poly{a.mask ^ b.mask}; }

Gf2Poly poly_mul(const Gf2Poly& a, const Gf2Poly& b) {
  if (a.is_zero() || b.is_zero()) return Gf2Poly{};
  if (*a.degree() + *b.degree() > 63)
    throw RangeError("product degree " + std::to_string(*a.degree() + *b.degree()) +
                     " exceeds the degree-63 limit");
  std::uint64_t acc = 0;
  for (std::uint64_t m = a.mask; m; m &= m - 1) {
    int shift = std::countr_zero(m);
    acc ^= b.mask << shift;
  }
  return Gf2Poly{acc};
}

DivRem poly_divrem(const Gf2Poly& dividend, const Gf2Poly& divisor) {
  if (divisor.is_zero()) throw DomainError("poly_divrem: division by the zero polynomial");
  int dd = *divisor.degree();
  std::uint64_t q = 0;
  std::uint64_t r = dividend.mask;
  while (std::bit_width(r) > static_cast<unsigned>(dd)) {
    int shift = std::bit_width(r) - 1 - dd;
    r ^= divisor.mask << shift;
    q |= 1ull << shift;
  }
  return DivRem{Gf2Poly{q}, Gf2Poly{r}};
}

Gf2Poly poly_mulmod(const Gf2Poly& a, const Gf2Poly& b, const Gf2Poly& m) {
  int md = degree_or_throw(m, "poly_mulmod");
  if (md > 32) throw DomainError("poly_mulmod: modulus degree exceeds 32");
  Gf2Poly ra = poly_divrem(a, m).remainder;
  Gf2Poly rb = poly_divrem(b, m).remainder;
  if (ra.is_zero() || rb.is_zero()) return Gf2Poly{};
  std::uint64_t acc = 0;
  for (std::uint64_t x = ra.mask; x; x &= x - 1) acc ^= rb.mask << std::countr_zero(x);
  return poly_divrem(Gf2Poly{acc}, m).remainder;
}

Gf2Poly x_pow_mod(std::uint64_t exponent, const Gf2Poly& m) {
  degree_or_throw(m, "x_pow_mod");
  Gf2Poly result = poly_divrem(Gf2Poly{1}, m).remainder;
  Gf2Poly base = poly_divrem(Gf2Poly{2}, m).remainder;
  while (exponent) {
    if (exponent & 1) result = poly_mulmod(result, base, m);
    base = poly_mulmod(base, base, m);
    exponent >>= 1;
  }
  return result;
}

Gf2Poly poly_gcd(Gf2Poly a, Gf2Poly b) {
  while (!b.is_zero()) {
    Gf2Poly r = poly_divrem(a, b).remainder;
    a = b;
    b = r;
  }
  return a;
}

bool satisfies_char_constraint(const Gf2Poly& p) {
  return !p.is_zero() && *p.degree() >= 1 && (p.mask & 1);
}

bool is_irreducible(const Gf2Poly& p) {
  int n = degree_or_throw(p, "is_irreducible");
  if (n < 1 || n > 32) throw DomainError("is_irreducible: unsupported degree " + std::to_string(n));
  if (n == 1) return true;
  // x^(2^i) mod p for i = 0..n by repeated squaring.
  std::vector<Gf2Poly> xq(n + 1);
  xq[0] = poly_divrem(Gf2Poly{2}, p).remainder;
  for (int i = 1; i <= n; ++i) xq[i] = poly_mulmod(xq[i - 1], xq[i - 1], p);
  if (xq[n] != xq[0]) return false;
  for (std::uint64_t q : prime_factors(static_cast<std::uint64_t>(n))) {
    Gf2Poly diff = poly_add(xq[n / q], xq[0]);
    if (poly_gcd(diff, p).mask != 1) return false;
  }
  return true;
}

bool is_primitive(const Gf2Poly& p) {
  int n = degree_or_throw(p, "is_primitive");
  if (n < 1 || n > 32) throw DomainError("is_primitive: unsupported degree " + std::to_string(n));
  if (!(p.mask & 1)) return false;
  if (!is_irreducible(p)) return false;
  std::uint64_t order = (1ull << n) - 1;
  if (x_pow_mod(order, p).mask != 1) return false;
  for (std::uint64_t q : prime_factors(order))
    if (x_pow_mod(order / q, p).mask == 1) return false;
  return true;
}

namespace {

std::vector<Gf2Poly> scan_char_polys(int degree, bool primitive_only) {
  if (degree < 1 || degree > 24)
    throw DomainError("polynomial enumeration supports degrees 1..24, got " +
                      std::to_string(degree));
  std::vector<Gf2Poly> out;
  std::uint64_t top = 1ull << degree;
  for (std::uint64_t mid = 0; mid < (1ull << (degree - 1)); ++mid) {
    Gf2Poly p{top | (mid << 1) | 1};
    if (!primitive_only || is_primitive(p)) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<Gf2Poly> enumerate_primitive(int degree) { return scan_char_polys(degree, true); }

std::vector<Gf2Poly> enumerate_char_polys(int degree) { return scan_char_polys(degree, false); }

}  // namespace bist
