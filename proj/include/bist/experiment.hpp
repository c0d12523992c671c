#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bist/gf2poly.hpp"
#include "bist/misr.hpp"
#include "bist/netlist.hpp"

namespace bist {

enum class FaultClass {
  Detected,  // final signature differs from the fault-free one
  Aliased,   // response stream differed somewhere, signatures still collide
  Untested,  // response stream never differed (the fault was not excited)
};

// Verdict for one injected fault after compacting a full pattern run.
struct FaultOutcome {
  Fault fault;
  FaultClass cls = FaultClass::Detected;
  MisrState signature;  // final register state under the fault
};

// Everything classify_faults learns about one (t_poly, p_poly, seed) cell.
struct CellResult {
  std::uint64_t length = 0;  // patterns applied
  MisrState fault_free_signature;
  std::vector<FaultOutcome> outcomes;  // enumerate_faults order
};

// One row of a sweep report.  rc() is the signature-match count: faults
// whose final signature equals the fault-free one whether or not their
// stream ever differed, i.e. aliased + untested.
struct ReportRow {
  std::string circuit;
  Gf2Poly t_poly;
  Gf2Poly p_poly;
  std::uint32_t seed = 0;
  std::uint64_t length = 0;
  std::uint64_t detected = 0;
  std::uint64_t aliased = 0;
  std::uint64_t untested = 0;
  MisrState fault_free_signature;

  std::uint64_t total_faults() const { return detected + aliased + untested; }
  std::uint64_t rc() const { return aliased + untested; }
  double aliasing_probability() const;  // aliased / total_faults
};

struct AliasingReport {
  std::vector<ReportRow> rows;
};

// Sweep axes.  Every t_poly must have degree = netlist inputs; the p_polys
// share one degree of at least max(2, netlist outputs) -- a register wider
// than the response word just carries zero-fed high taps.  seeds = nullopt
// expands to every nonzero seed 1..2^n-1; an explicitly empty list is an
// error.  pattern_length = nullopt uses the period of each t_poly.
struct ExperimentConfig {
  Netlist netlist;
  std::vector<Gf2Poly> t_polys;
  std::vector<Gf2Poly> p_polys;
  std::optional<std::vector<std::uint32_t>> seeds;
  std::optional<std::uint64_t> pattern_length;
  int jobs = 1;  // <= 0 means one worker per hardware thread
};

// Applies the pattern run to the fault-free netlist and to every fault in
// enumerate_faults order, compacting each response stream from the zero
// register state.
CellResult classify_faults(const Netlist& nl, const Gf2Poly& t_poly, const Gf2Poly& p_poly,
                           std::uint32_t seed,
                           std::optional<std::uint64_t> length = std::nullopt);

// classify_faults reduced to counts.
ReportRow run_single(const Netlist& nl, const Gf2Poly& t_poly, const Gf2Poly& p_poly,
                     std::uint32_t seed, std::optional<std::uint64_t> length = std::nullopt);

// Cross product of t_polys x p_polys x seeds (each axis sorted ascending,
// duplicates dropped), one run_single row per cell.  Rows are ordered by
// t_poly, then p_poly, then seed, regardless of worker count.
AliasingReport run_sweep(const ExperimentConfig& config);

// Per (circuit, t_poly, p_poly) pair: does the signature-match count rc
// stay the same across every seed in the report, and separately, does the
// whole (detected, aliased, untested) triple?
struct InvarianceVerdict {
  std::string circuit;
  Gf2Poly t_poly;
  Gf2Poly p_poly;
  bool rc_invariant = false;
  bool triple_invariant = false;
  std::uint64_t seed_count = 0;
  std::uint64_t baseline_rc = 0;      // rc at the smallest seed
  std::vector<ReportRow> deviations;  // rows whose triple differs from that seed's
};

// Requires at least two seeds per pair.
std::vector<InvarianceVerdict> check_seed_invariance(const AliasingReport& report);

enum class ReportFormat { Csv, Json, Table };

// CSV columns: circuit,t_poly,p_poly,seed,length,detected,aliased,untested,
// rc,s_g_hex,aliasing_probability.  JSON is an array of objects with the
// same fields (wrapped in {"meta":..., "rows":...} when meta is supplied).
// Table collapses each polynomial pair to its seed-invariant rc and throws
// DomainError naming the offending pair if any rc varies.  Output is
// byte-stable for a given report and meta.
void emit_report(const AliasingReport& report, ReportFormat format, std::ostream& out,
                 std::span<const std::pair<std::string, std::string>> meta = {});
void emit_report(const AliasingReport& report, ReportFormat format, const std::string& path,
                 std::span<const std::pair<std::string, std::string>> meta = {});

}  // namespace bist
