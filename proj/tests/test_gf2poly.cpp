#include "bist/gf2poly.hpp"

#include <random>
#include <vector>

#include <doctest.h>

#include "bist/errors.hpp"

using namespace bist;

TEST_CASE("parse_poly accepts caret form in any term order") {
  CHECK(parse_poly("1+x+x^3").mask == 0b1011);
  CHECK(parse_poly("x^3+x+1").mask == 0b1011);
  CHECK(parse_poly("1+x^2+x^5").mask == 0x25);
  CHECK(parse_poly("x").mask == 0b10);
  CHECK(parse_poly("x^1").mask == 0b10);
  CHECK(parse_poly("1").mask == 1);
  CHECK(parse_poly("0").mask == 0);
  CHECK(parse_poly(" 1 + x + x^3 ").mask == 0b1011);
}

TEST_CASE("parse_poly cancels repeated terms") {
  CHECK(parse_poly("x+x").mask == 0);
  CHECK(parse_poly("1+x+1").mask == 0b10);
}

TEST_CASE("parse_poly accepts hex masks") {
  CHECK(parse_poly("0x25").mask == 0x25);
  CHECK(parse_poly("0xB").mask == 0xb);
  CHECK(parse_poly("0xffffffffffffffff").mask == ~std::uint64_t{0});
}

TEST_CASE("parse_poly rejects malformed input with a byte offset") {
  CHECK_THROWS_AS(parse_poly(""), ParseError);
  CHECK_THROWS_AS(parse_poly("1+"), ParseError);
  CHECK_THROWS_AS(parse_poly("y"), ParseError);
  CHECK_THROWS_AS(parse_poly("x^"), ParseError);
  CHECK_THROWS_AS(parse_poly("1++x"), ParseError);
  CHECK_THROWS_AS(parse_poly("0xg1"), ParseError);
  try {
    parse_poly("1+x+q^3");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("parse_poly rejects out-of-range values") {
  CHECK_THROWS_AS(parse_poly("x^64"), RangeError);
  CHECK_THROWS_AS(parse_poly("0x1ffffffffffffffff"), RangeError);
  CHECK(parse_poly("x^63").mask == std::uint64_t{1} << 63);
}

TEST_CASE("string rendering round-trips") {
  CHECK(to_caret_string(Gf2Poly{0b1011}) == "1+x+x^3");
  CHECK(to_caret_string(Gf2Poly{0x25}) == "1+x^2+x^5");
  CHECK(to_caret_string(Gf2Poly{0}) == "0");
  CHECK(to_caret_string(Gf2Poly{0b10}) == "x");
  CHECK(to_hex_string(Gf2Poly{0b1011}) == "0xb");
  for (std::uint64_t mask : {std::uint64_t{1}, std::uint64_t{0x25}, std::uint64_t{0xdeadbeef}}) {
    CHECK(parse_poly(to_caret_string(Gf2Poly{mask})).mask == mask);
    CHECK(parse_poly(to_hex_string(Gf2Poly{mask})).mask == mask);
  }
}

TEST_CASE("degree") {
  CHECK(!Gf2Poly{0}.degree().has_value());
  CHECK(Gf2Poly{1}.degree() == 0);
  CHECK(Gf2Poly{0b1011}.degree() == 3);
}

TEST_CASE("addition is XOR and self-inverse") {
  Gf2Poly a{0b1011}, b{0b0110};
  CHECK(poly_add(a, b).mask == 0b1101);
  CHECK(poly_add(poly_add(a, b), b) == a);
}

TEST_CASE("multiplication") {
  CHECK(poly_mul(Gf2Poly{0b11}, Gf2Poly{0b11}).mask == 0b101);  // (1+x)^2 = 1+x^2
  CHECK(poly_mul(Gf2Poly{0b1011}, Gf2Poly{0}).mask == 0);
  CHECK(poly_mul(Gf2Poly{0b1011}, Gf2Poly{1}).mask == 0b1011);
  // x^32 * x^32 would pass degree 63
  Gf2Poly big{std::uint64_t{1} << 32};
  CHECK_THROWS_AS(poly_mul(big, big), RangeError);
}

TEST_CASE("division satisfies dividend = q*d + r with deg r < deg d") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Gf2Poly dividend{rng() & 0xffffff};
    Gf2Poly divisor{(rng() & 0xfff) | 1};
    auto [q, r] = poly_divrem(dividend, divisor);
    CHECK(poly_add(poly_mul(q, divisor), r) == dividend);
    if (!r.is_zero()) CHECK(*r.degree() < *divisor.degree());
  }
  CHECK_THROWS_AS(poly_divrem(Gf2Poly{0b101}, Gf2Poly{0}), DomainError);
}

TEST_CASE("mulmod and x_pow_mod agree with long multiplication") {
  Gf2Poly m{0b1011};  // 1+x+x^3
  CHECK(x_pow_mod(7, m).mask == 1);  // x has order 7
  CHECK(x_pow_mod(0, m).mask == 1);
  Gf2Poly acc{1};
  for (int e = 1; e <= 20; ++e) {
    acc = poly_mulmod(acc, Gf2Poly{0b10}, m);
    CHECK(acc == x_pow_mod(e, m));
  }
}

TEST_CASE("gcd") {
  Gf2Poly g{0b111};  // 1+x+x^2, irreducible
  Gf2Poly a = poly_mul(g, Gf2Poly{0b1011});
  Gf2Poly b = poly_mul(g, Gf2Poly{0b110});
  Gf2Poly d = poly_gcd(a, b);
  CHECK(poly_divrem(d, g).remainder.is_zero());  // g divides gcd
  CHECK(poly_gcd(a, Gf2Poly{0}) == a);
  CHECK(poly_gcd(Gf2Poly{0}, b) == b);
}

TEST_CASE("char constraint") {
  CHECK(satisfies_char_constraint(Gf2Poly{0b1011}));
  CHECK(!satisfies_char_constraint(Gf2Poly{0b1010}));  // no constant term
  CHECK(!satisfies_char_constraint(Gf2Poly{1}));       // degree 0
  CHECK(!satisfies_char_constraint(Gf2Poly{0}));
}

TEST_CASE("irreducibility") {
  CHECK(is_irreducible(Gf2Poly{0b111}));    // 1+x+x^2
  CHECK(!is_irreducible(Gf2Poly{0b101}));   // 1+x^2 = (1+x)^2
  CHECK(is_irreducible(Gf2Poly{0b1011}));   // 1+x+x^3
  CHECK(is_irreducible(Gf2Poly{0b1101}));   // 1+x^2+x^3
  CHECK(!is_irreducible(Gf2Poly{0b1111}));  // divisible by 1+x
  CHECK(is_irreducible(Gf2Poly{0b11111}));  // 1+x+x^2+x^3+x^4
}

TEST_CASE("irreducible but not primitive") {
  // 1+x+x^2+x^3+x^4: x has order 5, not 15
  Gf2Poly p{0b11111};
  CHECK(is_irreducible(p));
  CHECK(!is_primitive(p));
  CHECK(x_pow_mod(5, p).mask == 1);
}

TEST_CASE("primitive enumeration, small degrees") {
  auto deg3 = enumerate_primitive(3);
  REQUIRE(deg3.size() == 2);
  CHECK(deg3[0].mask == 0b1011);
  CHECK(deg3[1].mask == 0b1101);

  auto deg4 = enumerate_primitive(4);
  REQUIRE(deg4.size() == 2);
  CHECK(deg4[0].mask == 0x13);
  CHECK(deg4[1].mask == 0x19);

  CHECK(enumerate_primitive(5).size() == 6);
  CHECK(enumerate_primitive(6).size() == 6);
  CHECK(enumerate_primitive(8).size() == 16);  // phi(255)/8
}

TEST_CASE("char poly enumeration lists every mask with constant term 1") {
  auto deg3 = enumerate_char_polys(3);
  REQUIRE(deg3.size() == 4);
  CHECK(deg3[0].mask == 0b1001);
  CHECK(deg3[1].mask == 0b1011);
  CHECK(deg3[2].mask == 0b1101);
  CHECK(deg3[3].mask == 0b1111);
}

TEST_CASE("enumeration rejects unsupported degrees") {
  CHECK_THROWS_AS(enumerate_primitive(0), DomainError);
  CHECK_THROWS_AS(enumerate_primitive(25), DomainError);
  CHECK_THROWS_AS(is_primitive(Gf2Poly{(std::uint64_t{1} << 33) | 1}), DomainError);
}
