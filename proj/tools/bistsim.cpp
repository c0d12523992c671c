// bistsim: LFSR pattern generation, MISR signature compaction, and stuck-at
// aliasing sweeps over gate-level netlists, from one binary.

#include <charconv>
#include <cstdint>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "bist/errors.hpp"
#include "bist/experiment.hpp"
#include "bist/gf2poly.hpp"
#include "bist/lfsr.hpp"
#include "bist/misr.hpp"
#include "bist/netlist.hpp"

namespace {

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  std::uint64_t value = 0;
  const char* first = text.c_str();
  const char* last = first + text.size();
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    first += 2;
    base = 16;
  }
  auto [ptr, ec] = std::from_chars(first, last, value, base);
  if (ec != std::errc{} || ptr != last || first == last)
    throw bist::DomainError(what + ": expected a number, got '" + text + "'");
  return value;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
  return parts;
}

// "primitive" expands at the degree the netlist dictates; anything else is
// a comma list of caret or hex polynomials.
std::vector<bist::Gf2Poly> parse_poly_list(const std::string& text, int primitive_degree,
                                           const std::string& what) {
  if (text == "primitive") return bist::enumerate_primitive(primitive_degree);
  std::vector<bist::Gf2Poly> polys;
  for (const std::string& part : split_commas(text)) {
    if (part.empty()) throw bist::DomainError(what + ": empty entry in list '" + text + "'");
    polys.push_back(bist::parse_poly(part));
  }
  return polys;
}

std::optional<std::vector<std::uint32_t>> parse_seeds(const std::string& text) {
  if (text == "all") return std::nullopt;
  std::vector<std::uint32_t> seeds;
  for (const std::string& part : split_commas(text))
    seeds.push_back(static_cast<std::uint32_t>(parse_uint(part, "--seeds")));
  return seeds;
}

std::optional<std::uint64_t> parse_length(const std::string& text) {
  if (text == "auto") return std::nullopt;
  return parse_uint(text, "--length");
}

bist::ReportFormat parse_format(const std::string& text) {
  if (text == "csv") return bist::ReportFormat::Csv;
  if (text == "json") return bist::ReportFormat::Json;
  return bist::ReportFormat::Table;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct SweepArgs {
  std::string netlist_path;
  std::string tpolys = "primitive";
  std::string ppolys = "primitive";
  std::string seeds = "all";
  std::string length = "auto";
  int jobs = 0;
};

void add_sweep_options(CLI::App* cmd, SweepArgs& args) {
  cmd->add_option("--netlist", args.netlist_path, "gate-level netlist file")->required();
  cmd->add_option("--tpolys", args.tpolys,
                  "generator polynomials: comma list or 'primitive' (default)");
  cmd->add_option("--ppolys", args.ppolys,
                  "register polynomials: comma list or 'primitive' (default)");
  cmd->add_option("--seeds", args.seeds, "'all' (default) or comma list of nonzero seeds");
  cmd->add_option("--length", args.length, "'auto' (= generator period, default) or a count");
  cmd->add_option("--jobs", args.jobs, "worker threads; 0 = one per core");
}

bist::ExperimentConfig build_config(const SweepArgs& args) {
  bist::ExperimentConfig config;
  config.netlist = bist::load_netlist(args.netlist_path);
  int n = config.netlist.num_inputs();
  int k = std::max(2, config.netlist.num_outputs());
  config.t_polys = parse_poly_list(args.tpolys, n, "--tpolys");
  config.p_polys = parse_poly_list(args.ppolys, k, "--ppolys");
  config.seeds = parse_seeds(args.seeds);
  config.pattern_length = parse_length(args.length);
  config.jobs = args.jobs;
  return config;
}

int run_polys(int degree, bool primitive_only) {
  std::vector<bist::Gf2Poly> polys = primitive_only ? bist::enumerate_primitive(degree)
                                                    : bist::enumerate_char_polys(degree);
  for (const bist::Gf2Poly& p : polys)
    std::cout << bist::to_caret_string(p) << "  " << bist::to_hex_string(p) << '\n';
  return 0;
}

int run_period(const std::string& poly) {
  std::cout << bist::lfsr_period(bist::parse_poly(poly)) << '\n';
  return 0;
}

int run_patterns(const std::string& poly, std::uint64_t seed, const std::string& count) {
  bist::Gf2Poly t = bist::parse_poly(poly);
  int n = t.degree().value_or(0);
  bist::LfsrState state{static_cast<std::uint32_t>(seed), n};
  std::uint64_t len = count == "auto" ? bist::lfsr_period(t) : parse_uint(count, "--count");
  for (const bist::LfsrState& s : bist::generate_test_patterns(t, state, len))
    std::cout << bist::to_binary_string(s) << '\n';
  return 0;
}

int run_signature(const std::string& poly, const std::string& words) {
  bist::Gf2Poly p = bist::parse_poly(poly);
  std::vector<bist::ResponseWord> stream;
  for (const std::string& part : split_commas(words))
    stream.push_back({static_cast<std::uint32_t>(parse_uint(part, "--words"))});
  bist::MisrState s = bist::misr_signature(p, stream);
  std::cout << bist::to_binary_string(s) << ' ' << bist::to_hex_string(s) << '\n';
  return 0;
}

int run_faults(const std::string& netlist_path) {
  bist::Netlist nl = bist::load_netlist(netlist_path);
  std::vector<bist::Fault> faults = bist::enumerate_faults(nl);
  for (const bist::Fault& f : faults) std::cout << bist::fault_to_string(nl, f) << '\n';
  std::cout << nl.line_count() << " lines, " << faults.size() << " faults\n";
  return 0;
}

int run_sweep_cmd(const SweepArgs& args, const std::string& format, const std::string& out_path,
                  bool with_meta) {
  bist::ExperimentConfig config = build_config(args);
  bist::AliasingReport report = bist::run_sweep(config);

  std::vector<std::pair<std::string, std::string>> meta;
  if (with_meta) {
    meta.emplace_back("tool", "bistsim 0.1.0");
    meta.emplace_back("netlist", args.netlist_path);
    meta.emplace_back("generated", utc_timestamp());
  }
  if (out_path.empty())
    bist::emit_report(report, parse_format(format), std::cout, meta);
  else
    bist::emit_report(report, parse_format(format), out_path, meta);
  return 0;
}

int run_verify(const SweepArgs& args) {
  bist::ExperimentConfig config = build_config(args);
  bist::AliasingReport report = bist::run_sweep(config);
  std::vector<bist::InvarianceVerdict> verdicts = bist::check_seed_invariance(report);

  std::size_t variant = 0;
  for (const bist::InvarianceVerdict& v : verdicts) {
    std::cout << (v.rc_invariant ? "INVARIANT" : "VARIANT") << " T=" << bist::to_caret_string(v.t_poly)
              << " P=" << bist::to_caret_string(v.p_poly);
    if (v.rc_invariant) {
      std::cout << " rc=" << v.baseline_rc << " over " << v.seed_count << " seeds";
      if (!v.triple_invariant) std::cout << " (outcome mix varies by seed)";
    } else {
      ++variant;
      std::cout << " over " << v.seed_count << " seeds, baseline rc=" << v.baseline_rc << ":";
      std::size_t shown = 0;
      for (const bist::ReportRow& row : v.deviations) {
        if (shown++ == 8) {
          std::cout << " ...";
          break;
        }
        std::cout << " seed " << row.seed << " rc=" << row.rc();
      }
    }
    std::cout << '\n';
  }
  std::cout << verdicts.size() << " pairs checked: " << verdicts.size() - variant
            << " invariant, " << variant << " variant\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LFSR/MISR built-in self-test aliasing simulator"};
  app.require_subcommand(1);

  auto* polys = app.add_subcommand("polys", "list feedback polynomials of one degree");
  int degree = 0;
  bool primitive_only = false;
  polys->add_option("--degree", degree, "polynomial degree")->required();
  polys->add_flag("--primitive", primitive_only, "keep only primitive polynomials");

  auto* period = app.add_subcommand("period", "period of a feedback polynomial");
  std::string period_poly;
  period->add_option("--poly", period_poly, "caret form (1+x+x^3) or hex mask (0xb)")->required();

  auto* patterns = app.add_subcommand("patterns", "dump the generator state sequence");
  std::string patterns_poly, patterns_count = "auto";
  std::string patterns_seed;
  patterns->add_option("--poly", patterns_poly, "feedback polynomial")->required();
  patterns->add_option("--seed", patterns_seed, "nonzero initial state")->required();
  patterns->add_option("--count", patterns_count, "'auto' (= period, default) or a count");

  auto* signature = app.add_subcommand("signature", "compact response words into a signature");
  std::string signature_poly, signature_words;
  signature->add_option("--poly", signature_poly, "register feedback polynomial")->required();
  signature->add_option("--words", signature_words, "comma list of response words")->required();

  auto* faults = app.add_subcommand("faults", "enumerate the stuck-at fault universe");
  std::string faults_netlist;
  faults->add_option("--netlist", faults_netlist, "gate-level netlist file")->required();

  auto* run = app.add_subcommand("run", "sweep polynomials and seeds, report aliasing");
  SweepArgs run_args;
  add_sweep_options(run, run_args);
  std::string run_format = "csv", run_out;
  bool run_meta = false;
  run->add_option("--format", run_format, "csv (default), json, or table")
      ->check(CLI::IsMember({"csv", "json", "table"}));
  run->add_option("--out", run_out, "output file (default: stdout)");
  run->add_flag("--meta", run_meta, "include tool/netlist/timestamp metadata");

  auto* verify = app.add_subcommand("verify-invariance",
                                    "check whether rc depends on the seed, per polynomial pair");
  SweepArgs verify_args;
  add_sweep_options(verify, verify_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*polys) return run_polys(degree, primitive_only);
    if (*period) return run_period(period_poly);
    if (*patterns)
      return run_patterns(patterns_poly, parse_uint(patterns_seed, "--seed"), patterns_count);
    if (*signature) return run_signature(signature_poly, signature_words);
    if (*faults) return run_faults(faults_netlist);
    if (*run) return run_sweep_cmd(run_args, run_format, run_out, run_meta);
    if (*verify) return run_verify(verify_args);
  } catch (const bist::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
