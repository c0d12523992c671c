#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bist/gf2poly.hpp"

namespace bist {

// State of an n-stage external-XOR (Fibonacci) shift register.  Bit i-1 of
// `bits` is stage q_i, so the 3-stage state (q3 q2 q1) = 001 has bits = 1.
struct LfsrState {
  std::uint32_t bits = 0;
  int width = 0;  // 1..24

  friend bool operator==(const LfsrState&, const LfsrState&) = default;
};

// State-transition matrix of the register with feedback polynomial
// 1 + c_1 x + ... + c_n x^n.  One clock computes
//
//   q_n(t+1) = sum_j c_j * q_{n+1-j}(t)      (feedback row)
//   q_i(t+1) = q_{i+1}(t)   for i < n        (shift rows)
//
// rows[r] is the equation for q_{n-r} as a mask over state bits, and
// entry(r, c) reads the matrix in (q_n ... q_1) display order.  The matrix
// is invertible for every feedback polynomial with constant term 1, and its
// characteristic polynomial is the reciprocal x^n * p(1/x) of the feedback
// polynomial (see char_poly_of_matrix).
struct TransitionMatrix {
  int size = 0;
  std::vector<std::uint32_t> rows;

  bool entry(int row, int col) const { return rows[row] >> (size - 1 - col) & 1; }
};

// Requires a feedback polynomial with constant term 1 and degree 1..24.
TransitionMatrix build_transition_matrix(const Gf2Poly& t_poly);

// One clock of the register: generic matrix * vector product over GF(2).
LfsrState lfsr_step(const LfsrState& state, const TransitionMatrix& matrix);

// Smallest p >= 1 with A^p * s = s for the seed 00..01.  Equals 2^n - 1
// exactly when t_poly is primitive.
std::uint64_t lfsr_period(const Gf2Poly& t_poly);

// count patterns starting with the seed itself.  The seed must be nonzero
// (the zero state is a fixed point and generates nothing).
std::vector<LfsrState> generate_test_patterns(const Gf2Poly& t_poly, const LfsrState& seed,
                                              std::uint64_t count);

// Serial stream read from stage q_1, one bit per clock starting at t = 0.
std::vector<std::uint8_t> serial_output_stream(const Gf2Poly& t_poly, const LfsrState& seed,
                                               std::uint64_t count);

// The initial loading a_{-1}..a_{-n} (index 0 = a_{-1}) whose generated
// sequence continues into the q_1 stream of the register seeded with
// `state`: the recurrence a_q = sum_j c_j a_{q-j} run from these bits
// reproduces serial_output_stream(t_poly, state, ...).
std::vector<std::uint8_t> initial_bits_for_state(const Gf2Poly& t_poly, const LfsrState& state);

// Numerator B(x) = sum_{j=1..n} c_j (a_{-j} + a_{-j+1} x + ... + a_{-1} x^{j-1})
// of the generating function B(x)/T(x) for the given initial loading.
Gf2Poly numerator_from_initial_bits(const Gf2Poly& t_poly, std::span<const std::uint8_t> bits);

// Power-series long division B(x)/T(x): emits a_0, a_1, ... for the initial
// loading a_{-1}..a_{-n}.  Agrees bit for bit with serial_output_stream from
// the matching state; exists to validate the generating-function route
// against direct simulation.
std::vector<std::uint8_t> stream_by_long_division(const Gf2Poly& t_poly,
                                                  std::span<const std::uint8_t> initial_bits,
                                                  std::uint64_t count);

// det(A + xI) by cofactor expansion over GF(2)[x]; generic, no
// companion-form shortcut.  Audits the convention above: the result is the
// reciprocal of the feedback polynomial, not the polynomial itself.
// Supports size <= 10.
Gf2Poly char_poly_of_matrix(const TransitionMatrix& matrix);

// "q_n ... q_1" rendering, e.g. "001" for bits=1, width=3.
std::string to_binary_string(const LfsrState& state);

}  // namespace bist
