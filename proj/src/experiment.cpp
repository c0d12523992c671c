#include "bist/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "bist/errors.hpp"
#include "bist/lfsr.hpp"

namespace bist {
namespace {

// Shared degree checks for one cell.  The generator must have one stage per
// netlist input; the register must have at least one stage per output (plus
// the two-stage floor misr_init enforces anyway).
void check_cell_polys(const Netlist& nl, const Gf2Poly& t_poly, const Gf2Poly& p_poly) {
  int n = nl.num_inputs();
  int k = nl.num_outputs();
  auto dt = t_poly.degree();
  if (!dt || *dt != n)
    throw DomainError("generator polynomial degree " + std::to_string(dt.value_or(0)) +
                      " does not match the netlist input count " + std::to_string(n));
  if (k > 32)
    throw DomainError("netlist has " + std::to_string(k) +
                      " outputs; signature registers top out at 32 stages");
  auto dp = p_poly.degree();
  int need = std::max(2, k);
  if (!dp || *dp < need)
    throw DomainError("signature polynomial degree " + std::to_string(dp.value_or(0)) +
                      " is below the required " + std::to_string(need) + " for " +
                      std::to_string(k) + " outputs");
}

void check_seed(std::uint32_t seed, int n) {
  if (seed == 0) throw DomainError("seed must be nonzero");
  if (n < 32 && seed >> n)
    throw DomainError("seed " + std::to_string(seed) + " does not fit in " + std::to_string(n) +
                      " stages");
}

std::string pair_label(const Gf2Poly& t, const Gf2Poly& p) {
  return "T=" + to_caret_string(t) + ", P=" + to_caret_string(p);
}

std::string format_probability(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
  (void)ec;
  return std::string(buf, end);
}

void write_meta_comments(std::ostream& out,
                         std::span<const std::pair<std::string, std::string>> meta) {
  for (const auto& [key, value] : meta) out << "# " << key << ": " << value << '\n';
}

void write_csv(const AliasingReport& report, std::ostream& out,
               std::span<const std::pair<std::string, std::string>> meta) {
  write_meta_comments(out, meta);
  out << "circuit,t_poly,p_poly,seed,length,detected,aliased,untested,rc,s_g_hex,"
         "aliasing_probability\n";
  for (const ReportRow& row : report.rows) {
    out << row.circuit << ',' << to_caret_string(row.t_poly) << ',' << to_caret_string(row.p_poly)
        << ',' << row.seed << ',' << row.length << ',' << row.detected << ',' << row.aliased
        << ',' << row.untested << ',' << row.rc() << ',' << to_hex_string(row.fault_free_signature)
        << ',' << format_probability(row.aliasing_probability()) << '\n';
  }
}

void write_json(const AliasingReport& report, std::ostream& out,
                std::span<const std::pair<std::string, std::string>> meta) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const ReportRow& row : report.rows) {
    // Round first so the dumped number matches the CSV rendering.
    double probability = std::round(row.aliasing_probability() * 1e6) / 1e6;
    rows.push_back({{"circuit", row.circuit},
                    {"t_poly", to_caret_string(row.t_poly)},
                    {"p_poly", to_caret_string(row.p_poly)},
                    {"seed", row.seed},
                    {"length", row.length},
                    {"detected", row.detected},
                    {"aliased", row.aliased},
                    {"untested", row.untested},
                    {"rc", row.rc()},
                    {"s_g_hex", to_hex_string(row.fault_free_signature)},
                    {"aliasing_probability", probability}});
  }
  if (meta.empty()) {
    out << rows.dump(2) << '\n';
    return;
  }
  nlohmann::ordered_json doc;
  nlohmann::ordered_json m;
  for (const auto& [key, value] : meta) m[key] = value;
  doc["meta"] = m;
  doc["rows"] = rows;
  out << doc.dump(2) << '\n';
}

void write_table(const AliasingReport& report, std::ostream& out,
                 std::span<const std::pair<std::string, std::string>> meta) {
  const std::string& circuit = report.rows.front().circuit;
  for (const ReportRow& row : report.rows)
    if (row.circuit != circuit)
      throw DomainError("table format renders one circuit at a time; report mixes " + circuit +
                        " and " + row.circuit);

  std::vector<Gf2Poly> t_list, p_list;
  for (const ReportRow& row : report.rows) {
    if (std::find(t_list.begin(), t_list.end(), row.t_poly) == t_list.end())
      t_list.push_back(row.t_poly);
    if (std::find(p_list.begin(), p_list.end(), row.p_poly) == p_list.end())
      p_list.push_back(row.p_poly);
  }
  std::sort(t_list.begin(), t_list.end(), [](auto a, auto b) { return a.mask < b.mask; });
  std::sort(p_list.begin(), p_list.end(), [](auto a, auto b) { return a.mask < b.mask; });

  // One rc per pair; a pair whose rc moves with the seed has no single cell
  // value, so refuse rather than print something misleading.
  std::vector<std::vector<std::uint64_t>> cell(t_list.size(),
                                               std::vector<std::uint64_t>(p_list.size(), 0));
  std::vector<std::vector<bool>> seen(t_list.size(), std::vector<bool>(p_list.size(), false));
  std::uint64_t min_len = report.rows.front().length, max_len = min_len;
  std::vector<std::uint32_t> seeds;
  for (const ReportRow& row : report.rows) {
    std::size_t ti = std::find(t_list.begin(), t_list.end(), row.t_poly) - t_list.begin();
    std::size_t pi = std::find(p_list.begin(), p_list.end(), row.p_poly) - p_list.begin();
    if (seen[ti][pi] && cell[ti][pi] != row.rc())
      throw DomainError("rc varies across seeds for " + pair_label(row.t_poly, row.p_poly) +
                        "; use csv or json to see per-seed rows");
    cell[ti][pi] = row.rc();
    seen[ti][pi] = true;
    min_len = std::min(min_len, row.length);
    max_len = std::max(max_len, row.length);
    if (std::find(seeds.begin(), seeds.end(), row.seed) == seeds.end()) seeds.push_back(row.seed);
  }

  write_meta_comments(out, meta);
  out << "circuit: " << circuit << '\n';
  out << "faults: " << report.rows.front().total_faults() << "  seeds: " << seeds.size();
  if (min_len == max_len) out << "  patterns: " << min_len;
  out << '\n';
  out << "rc by generator polynomial (rows) and register polynomial (columns)\n\n";

  std::size_t label_w = 0;
  for (const Gf2Poly& t : t_list) label_w = std::max(label_w, to_caret_string(t).size());
  std::vector<std::size_t> col_w(p_list.size());
  for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
    col_w[pi] = to_caret_string(p_list[pi]).size();
    for (std::size_t ti = 0; ti < t_list.size(); ++ti)
      col_w[pi] = std::max(col_w[pi], std::to_string(cell[ti][pi]).size());
  }

  out << std::string(label_w, ' ');
  for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
    std::string label = to_caret_string(p_list[pi]);
    out << "  " << std::string(col_w[pi] - label.size(), ' ') << label;
  }
  out << '\n';
  for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
    std::string label = to_caret_string(t_list[ti]);
    out << label << std::string(label_w - label.size(), ' ');
    for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
      std::string value = seen[ti][pi] ? std::to_string(cell[ti][pi]) : std::string("-");
      out << "  " << std::string(col_w[pi] - value.size(), ' ') << value;
    }
    out << '\n';
  }
}

}  // namespace

double ReportRow::aliasing_probability() const {
  std::uint64_t total = total_faults();
  return total == 0 ? 0.0 : static_cast<double>(aliased) / static_cast<double>(total);
}

CellResult classify_faults(const Netlist& nl, const Gf2Poly& t_poly, const Gf2Poly& p_poly,
                           std::uint32_t seed, std::optional<std::uint64_t> length) {
  check_cell_polys(nl, t_poly, p_poly);
  int n = nl.num_inputs();
  check_seed(seed, n);

  std::uint64_t len = length ? *length : lfsr_period(t_poly);
  if (len == 0) throw DomainError("pattern length must be at least 1");

  std::vector<LfsrState> patterns = generate_test_patterns(t_poly, LfsrState{seed, n}, len);

  std::vector<std::uint8_t> scratch;
  std::vector<std::uint32_t> good(len);
  MisrState s_g = misr_init(p_poly);
  for (std::uint64_t i = 0; i < len; ++i) {
    good[i] = static_cast<std::uint32_t>(evaluate(nl, patterns[i].bits, scratch));
    s_g = misr_step(s_g, ResponseWord{good[i]});
  }

  CellResult result{len, s_g, {}};
  std::vector<Fault> faults = enumerate_faults(nl);
  result.outcomes.reserve(faults.size());
  for (const Fault& fault : faults) {
    MisrState s = misr_init(p_poly);
    bool differs = false;
    for (std::uint64_t i = 0; i < len; ++i) {
      auto word =
          static_cast<std::uint32_t>(evaluate_with_fault(nl, patterns[i].bits, fault, scratch));
      differs |= word != good[i];
      s = misr_step(s, ResponseWord{word});
    }
    FaultClass cls = !differs           ? FaultClass::Untested
                     : s.bits == s_g.bits ? FaultClass::Aliased
                                          : FaultClass::Detected;
    result.outcomes.push_back({fault, cls, s});
  }
  return result;
}

ReportRow run_single(const Netlist& nl, const Gf2Poly& t_poly, const Gf2Poly& p_poly,
                     std::uint32_t seed, std::optional<std::uint64_t> length) {
  CellResult cell = classify_faults(nl, t_poly, p_poly, seed, length);
  ReportRow row;
  row.circuit = nl.name;
  row.t_poly = t_poly;
  row.p_poly = p_poly;
  row.seed = seed;
  row.length = cell.length;
  row.fault_free_signature = cell.fault_free_signature;
  for (const FaultOutcome& outcome : cell.outcomes) {
    switch (outcome.cls) {
      case FaultClass::Detected: ++row.detected; break;
      case FaultClass::Aliased: ++row.aliased; break;
      case FaultClass::Untested: ++row.untested; break;
    }
  }
  return row;
}

AliasingReport run_sweep(const ExperimentConfig& config) {
  const Netlist& nl = config.netlist;
  int n = nl.num_inputs();
  if (config.t_polys.empty()) throw DomainError("no generator polynomials configured");
  if (config.p_polys.empty()) throw DomainError("no register polynomials configured");

  auto sorted_unique = [](std::vector<Gf2Poly> polys) {
    std::sort(polys.begin(), polys.end(), [](auto a, auto b) { return a.mask < b.mask; });
    polys.erase(std::unique(polys.begin(), polys.end()), polys.end());
    return polys;
  };
  std::vector<Gf2Poly> t_polys = sorted_unique(config.t_polys);
  std::vector<Gf2Poly> p_polys = sorted_unique(config.p_polys);
  for (const Gf2Poly& p : p_polys)
    if (p.degree() != p_polys.front().degree())
      throw DomainError("register polynomials must share one degree; got " +
                        to_caret_string(p_polys.front()) + " and " + to_caret_string(p));
  for (const Gf2Poly& t : t_polys) check_cell_polys(nl, t, p_polys.front());

  std::vector<std::uint32_t> seeds;
  if (config.seeds) {
    seeds = *config.seeds;
    if (seeds.empty()) throw DomainError("seed list is empty");
    for (std::uint32_t s : seeds) check_seed(s, n);
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  } else {
    if (n > 24) throw DomainError("cannot expand every seed for " + std::to_string(n) + " stages");
    seeds.resize((std::uint64_t{1} << n) - 1);
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = static_cast<std::uint32_t>(i + 1);
  }

  std::size_t total = t_polys.size() * p_polys.size() * seeds.size();
  AliasingReport report;
  report.rows.resize(total);

  auto run_cell = [&](std::size_t idx) {
    std::size_t si = idx % seeds.size();
    std::size_t pi = idx / seeds.size() % p_polys.size();
    std::size_t ti = idx / seeds.size() / p_polys.size();
    report.rows[idx] =
        run_single(nl, t_polys[ti], p_polys[pi], seeds[si], config.pattern_length);
  };

  unsigned jobs = config.jobs <= 0 ? std::max(1u, std::thread::hardware_concurrency())
                                   : static_cast<unsigned>(config.jobs);
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));
  if (jobs <= 1) {
    for (std::size_t idx = 0; idx < total; ++idx) run_cell(idx);
    return report;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      try {
        run_cell(idx);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return report;
}

std::vector<InvarianceVerdict> check_seed_invariance(const AliasingReport& report) {
  if (report.rows.empty()) throw DomainError("cannot judge invariance of an empty report");

  struct Group {
    std::string circuit;
    Gf2Poly t_poly, p_poly;
    std::vector<const ReportRow*> rows;
  };
  std::vector<Group> groups;
  for (const ReportRow& row : report.rows) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.circuit == row.circuit && g.t_poly == row.t_poly && g.p_poly == row.p_poly;
    });
    if (it == groups.end()) {
      groups.push_back({row.circuit, row.t_poly, row.p_poly, {}});
      it = groups.end() - 1;
    }
    it->rows.push_back(&row);
  }

  std::vector<InvarianceVerdict> verdicts;
  verdicts.reserve(groups.size());
  for (const Group& group : groups) {
    if (group.rows.size() < 2)
      throw DomainError("seed invariance needs at least two seeds per pair; " +
                        pair_label(group.t_poly, group.p_poly) + " has " +
                        std::to_string(group.rows.size()));
    const ReportRow* base = *std::min_element(
        group.rows.begin(), group.rows.end(),
        [](const ReportRow* a, const ReportRow* b) { return a->seed < b->seed; });
    InvarianceVerdict verdict;
    verdict.circuit = group.circuit;
    verdict.t_poly = group.t_poly;
    verdict.p_poly = group.p_poly;
    verdict.seed_count = group.rows.size();
    verdict.baseline_rc = base->rc();
    verdict.rc_invariant = true;
    verdict.triple_invariant = true;
    for (const ReportRow* row : group.rows) {
      if (row->rc() != base->rc()) verdict.rc_invariant = false;
      if (row->detected != base->detected || row->aliased != base->aliased ||
          row->untested != base->untested) {
        verdict.triple_invariant = false;
        verdict.deviations.push_back(*row);
      }
    }
    verdicts.push_back(std::move(verdict));
  }
  return verdicts;
}

void emit_report(const AliasingReport& report, ReportFormat format, std::ostream& out,
                 std::span<const std::pair<std::string, std::string>> meta) {
  if (report.rows.empty()) throw DomainError("refusing to emit an empty report");
  switch (format) {
    case ReportFormat::Csv: write_csv(report, out, meta); break;
    case ReportFormat::Json: write_json(report, out, meta); break;
    case ReportFormat::Table: write_table(report, out, meta); break;
  }
  if (!out) throw DomainError("write failed while emitting report");
}

void emit_report(const AliasingReport& report, ReportFormat format, const std::string& path,
                 std::span<const std::pair<std::string, std::string>> meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  emit_report(report, format, out, meta);
  out.flush();
  if (!out) throw DomainError("write failed: " + path);
}

}  // namespace bist
