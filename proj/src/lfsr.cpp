#include "bist/lfsr.hpp"

#include <bit>
#include <unordered_map>

#include "bist/errors.hpp"

namespace bist {

namespace {

int checked_degree(const Gf2Poly& t_poly, const char* who) {
  if (!satisfies_char_constraint(t_poly))
    throw DomainError(std::string(who) +
                      ": feedback polynomial needs constant term 1 and degree >= 1, got " +
                      to_caret_string(t_poly));
  int n = *t_poly.degree();
  if (n > 24)
    throw DomainError(std::string(who) + ": degree " + std::to_string(n) + " exceeds 24 stages");
  return n;
}

void check_state(const LfsrState& s, int n, const char* who) {
  if (s.width != n)
    throw DomainError(std::string(who) + ": state width " + std::to_string(s.width) +
                      " does not match the " + std::to_string(n) + "-stage register");
  if (n < 32 && (s.bits >> n) != 0)
    throw DomainError(std::string(who) + ": state has bits beyond stage q_" + std::to_string(n));
}

// Feedback taps paired with the reversed stage order: bit i set means stage
// q_{i+1} feeds the XOR (coefficient c_{n-i}).
std::uint32_t reversed_taps(const Gf2Poly& t_poly, int n) {
  std::uint32_t taps = static_cast<std::uint32_t>(t_poly.mask >> 1) & ((1u << n) - 1);
  std::uint32_t rev = 0;
  for (int i = 0; i < n; ++i)
    if (taps >> i & 1) rev |= 1u << (n - 1 - i);
  return rev;
}

std::uint32_t companion_step(std::uint32_t bits, std::uint32_t rev_taps, int n) {
  std::uint32_t fb = static_cast<std::uint32_t>(std::popcount(bits & rev_taps) & 1);
  return (bits >> 1) | (fb << (n - 1));
}

}  // namespace

TransitionMatrix build_transition_matrix(const Gf2Poly& t_poly) {
  int n = checked_degree(t_poly, "build_transition_matrix");
  TransitionMatrix m;
  m.size = n;
  m.rows.resize(n);
  m.rows[0] = reversed_taps(t_poly, n);
  for (int r = 1; r < n; ++r) m.rows[r] = 1u << (n - r);
  return m;
}

LfsrState lfsr_step(const LfsrState& state, const TransitionMatrix& matrix) {
  check_state(state, matrix.size, "lfsr_step");
  std::uint32_t next = 0;
  for (int r = 0; r < matrix.size; ++r) {
    std::uint32_t bit = static_cast<std::uint32_t>(std::popcount(state.bits & matrix.rows[r]) & 1);
    next |= bit << (matrix.size - 1 - r);
  }
  return LfsrState{next, matrix.size};
}

std::uint64_t lfsr_period(const Gf2Poly& t_poly) {
  int n = checked_degree(t_poly, "lfsr_period");
  std::uint32_t rev = reversed_taps(t_poly, n);
  std::uint32_t seed = 1;
  std::uint32_t s = seed;
  std::uint64_t steps = 0;
  do {
    s = companion_step(s, rev, n);
    ++steps;
  } while (s != seed);
  return steps;
}

std::vector<LfsrState> generate_test_patterns(const Gf2Poly& t_poly, const LfsrState& seed,
                                              std::uint64_t count) {
  int n = checked_degree(t_poly, "generate_test_patterns");
  check_state(seed, n, "generate_test_patterns");
  if (seed.bits == 0)
    throw DomainError("generate_test_patterns: zero seed is a fixed point, not a valid seed");
  if (count < 1) throw DomainError("generate_test_patterns: count must be at least 1");
  std::uint32_t rev = reversed_taps(t_poly, n);
  std::vector<LfsrState> out;
  out.reserve(count);
  std::uint32_t s = seed.bits;
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(LfsrState{s, n});
    s = companion_step(s, rev, n);
  }
  return out;
}

std::vector<std::uint8_t> serial_output_stream(const Gf2Poly& t_poly, const LfsrState& seed,
                                               std::uint64_t count) {
  int n = checked_degree(t_poly, "serial_output_stream");
  check_state(seed, n, "serial_output_stream");
  std::uint32_t rev = reversed_taps(t_poly, n);
  std::vector<std::uint8_t> out;
  out.reserve(count);
  std::uint32_t s = seed.bits;
  for (std::uint64_t i = 0; i < count; ++i) {
    out.push_back(static_cast<std::uint8_t>(s & 1));
    s = companion_step(s, rev, n);
  }
  return out;
}

std::vector<std::uint8_t> initial_bits_for_state(const Gf2Poly& t_poly, const LfsrState& state) {
  int n = checked_degree(t_poly, "initial_bits_for_state");
  check_state(state, n, "initial_bits_for_state");
  // ext[i + n] = a_i for i in [-n, n).  a_0..a_{n-1} are the seed stages;
  // walk the recurrence backwards using c_n = 1.
  std::vector<std::uint8_t> ext(2 * n, 0);
  for (int i = 0; i < n; ++i) ext[n + i] = static_cast<std::uint8_t>(state.bits >> i & 1);
  for (int k = 1; k <= n; ++k) {
    int acc = ext[n + n - k];
    for (int j = 1; j < n; ++j)
      if (t_poly.mask >> j & 1) acc ^= ext[n + n - k - j];
    ext[n - k] = static_cast<std::uint8_t>(acc & 1);
  }
  std::vector<std::uint8_t> bits(n);
  for (int m = 1; m <= n; ++m) bits[m - 1] = ext[n - m];
  return bits;
}

Gf2Poly numerator_from_initial_bits(const Gf2Poly& t_poly, std::span<const std::uint8_t> bits) {
  int n = checked_degree(t_poly, "numerator_from_initial_bits");
  if (bits.size() != static_cast<std::size_t>(n))
    throw DomainError("numerator_from_initial_bits: expected " + std::to_string(n) +
                      " initial bits, got " + std::to_string(bits.size()));
  std::uint64_t b = 0;
  for (int i = 0; i < n; ++i) {
    int coeff = 0;
    for (int j = i + 1; j <= n; ++j)
      if (t_poly.mask >> j & 1) coeff ^= bits[j - i - 1];
    b |= static_cast<std::uint64_t>(coeff & 1) << i;
  }
  return Gf2Poly{b};
}

std::vector<std::uint8_t> stream_by_long_division(const Gf2Poly& t_poly,
                                                  std::span<const std::uint8_t> initial_bits,
                                                  std::uint64_t count) {
  Gf2Poly numerator = numerator_from_initial_bits(t_poly, initial_bits);
  std::vector<std::uint8_t> out;
  out.reserve(count);
  // Long division of the power series B(x)/T(x): the window holds the
  // low-order remainder coefficients; T's constant term clears bit 0.
  std::uint64_t window = numerator.mask;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint8_t a = static_cast<std::uint8_t>(window & 1);
    if (a) window ^= t_poly.mask;
    window >>= 1;
    out.push_back(a);
  }
  return out;
}

Gf2Poly char_poly_of_matrix(const TransitionMatrix& matrix) {
  int n = matrix.size;
  if (n < 1 || n > 10)
    throw DomainError("char_poly_of_matrix: supported for 1..10 stages, got " + std::to_string(n));
  // Cofactor expansion of det(A + xI), one row at a time; colmask tracks the
  // columns still unused, so the row index is implied by its popcount.
  // Signs vanish in characteristic 2.
  std::unordered_map<std::uint32_t, std::uint64_t> memo;
  auto det = [&](auto&& self, std::uint32_t colmask) -> std::uint64_t {
    if (colmask == 0) return 1;
    auto it = memo.find(colmask);
    if (it != memo.end()) return it->second;
    int row = n - std::popcount(colmask);
    std::uint64_t acc = 0;
    for (std::uint32_t rest = colmask; rest; rest &= rest - 1) {
      int col = std::countr_zero(rest);
      std::uint64_t entry = (matrix.entry(row, col) ? 1u : 0u) ^ (row == col ? 2u : 0u);
      if (!entry) continue;
      Gf2Poly term = poly_mul(Gf2Poly{entry}, Gf2Poly{self(self, colmask & ~(1u << col))});
      acc ^= term.mask;
    }
    memo.emplace(colmask, acc);
    return acc;
  };
  return Gf2Poly{det(det, (1u << n) - 1)};
}

std::string to_binary_string(const LfsrState& state) {
  std::string out(state.width, '0');
  for (int i = 0; i < state.width; ++i)
    if (state.bits >> i & 1) out[state.width - 1 - i] = '1';
  return out;
}

}  // namespace bist
