#include "bist/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "bist/errors.hpp"

namespace bist {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg, static_cast<std::size_t>(line));
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(head) && s[0] != '_') return false;
  for (char c : s.substr(1))
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool lookup_op(const std::string& word, GateOp& op) {
  if (word == "AND") op = GateOp::And;
  else if (word == "OR") op = GateOp::Or;
  else if (word == "NAND") op = GateOp::Nand;
  else if (word == "NOR") op = GateOp::Nor;
  else if (word == "XOR") op = GateOp::Xor;
  else if (word == "XNOR") op = GateOp::Xnor;
  else if (word == "NOT") op = GateOp::Not;
  else if (word == "BUF") op = GateOp::Buf;
  else return false;
  return true;
}

struct NetRecord {
  std::string name;
  int driver_line = -1;   // statement that drives the net, -1 while unseen
  int first_ref = -1;     // earliest mention, for undefined-net messages
  int def_rank = -1;      // position among driving statements
};

struct Parser {
  std::vector<NetRecord> nets;
  std::unordered_map<std::string, int> ids;
  std::vector<int> inputs, outputs;
  std::vector<Gate> gates;
  int next_rank = 0;

  int touch(std::string_view name, int line) {
    auto it = ids.find(std::string(name));
    if (it != ids.end()) {
      if (nets[it->second].first_ref < 0) nets[it->second].first_ref = line;
      return it->second;
    }
    int id = static_cast<int>(nets.size());
    nets.push_back(NetRecord{std::string(name), -1, line, -1});
    ids.emplace(name, id);
    return id;
  }

  void drive(int id, int line) {
    if (nets[id].driver_line >= 0)
      fail(line, "duplicate driver for net '" + nets[id].name + "' (first driven on line " +
                     std::to_string(nets[id].driver_line) + ")");
    nets[id].driver_line = line;
    nets[id].def_rank = next_rank++;
  }
};

// "NAME ( arg {, arg} )" tail after the keyword or '=' has been split off.
std::vector<std::string> parse_call_args(std::string_view body, int line) {
  std::size_t open = body.find('(');
  if (open == std::string_view::npos || body.back() != ')') fail(line, "expected '(...)'");
  std::string_view inner = body.substr(open + 1, body.size() - open - 2);
  std::vector<std::string> args;
  std::size_t start = 0;
  while (start <= inner.size()) {
    std::size_t comma = inner.find(',', start);
    std::string_view piece = comma == std::string_view::npos ? inner.substr(start)
                                                             : inner.substr(start, comma - start);
    piece = trim(piece);
    if (!piece.empty()) args.emplace_back(piece);
    else if (!trim(inner).empty())
      fail(line, "empty argument in '(...)'");
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return args;
}

void check_arity(GateOp op, std::size_t n, int line) {
  bool unary = op == GateOp::Not || op == GateOp::Buf;
  if (unary && n != 1) fail(line, "bad arity: unary gate takes exactly 1 input, got " + std::to_string(n));
  if (!unary && n < 2) fail(line, "bad arity: gate needs at least 2 inputs, got " + std::to_string(n));
  if (n > 64) fail(line, "bad arity: gate inputs are limited to 64, got " + std::to_string(n));
}

std::uint8_t apply_gate(GateOp op, const std::uint8_t* vals, std::size_t n) {
  switch (op) {
    case GateOp::And:
    case GateOp::Nand: {
      std::uint8_t v = 1;
      for (std::size_t i = 0; i < n; ++i) v &= vals[i];
      return op == GateOp::Nand ? static_cast<std::uint8_t>(v ^ 1) : v;
    }
    case GateOp::Or:
    case GateOp::Nor: {
      std::uint8_t v = 0;
      for (std::size_t i = 0; i < n; ++i) v |= vals[i];
      return op == GateOp::Nor ? static_cast<std::uint8_t>(v ^ 1) : v;
    }
    case GateOp::Xor:
    case GateOp::Xnor: {
      std::uint8_t v = 0;
      for (std::size_t i = 0; i < n; ++i) v ^= vals[i];
      return op == GateOp::Xnor ? static_cast<std::uint8_t>(v ^ 1) : v;
    }
    case GateOp::Not:
      return vals[0] ^ 1;
    case GateOp::Buf:
      return vals[0];
  }
  return 0;
}

void validate_fault(const Netlist& nl, const Fault& f) {
  if (f.stuck != 0 && f.stuck != 1)
    throw DomainError("fault stuck value must be 0 or 1, got " + std::to_string(f.stuck));
  int net_count = static_cast<int>(nl.nets.size());
  if (f.site == Fault::Site::Stem) {
    if (f.net < 0 || f.net >= net_count || f.gate != -1 || f.pin != -1)
      throw DomainError("stem fault does not belong to this netlist");
    return;
  }
  if (f.gate < 0 || f.gate >= static_cast<int>(nl.gates.size()))
    throw DomainError("branch fault names a gate outside this netlist");
  const Gate& g = nl.gates[f.gate];
  if (f.pin < 0 || f.pin >= static_cast<int>(g.inputs.size()) || g.inputs[f.pin] != f.net)
    throw DomainError("branch fault names a pin outside this netlist");
  if (nl.fanout[f.net] < 2)
    throw DomainError("branch fault on net '" + nl.nets[f.net] +
                      "' with fanout below 2; only its stem exists");
}

std::uint64_t evaluate_impl(const Netlist& nl, std::uint64_t in, const Fault* fault,
                            std::vector<std::uint8_t>& vals) {
  int n = nl.num_inputs();
  if (n < 64 && (in >> n) != 0)
    throw DomainError("input vector has bits past the " + std::to_string(n) + " declared inputs");
  if (fault) validate_fault(nl, *fault);
  vals.assign(nl.nets.size(), 0);

  bool stem = fault && fault->site == Fault::Site::Stem;
  for (int i = 0; i < n; ++i) {
    int id = nl.inputs[i];
    std::uint8_t v = static_cast<std::uint8_t>(in >> i & 1);
    if (stem && fault->net == id) v = static_cast<std::uint8_t>(fault->stuck);
    vals[id] = v;
  }

  std::uint8_t pins[64];
  for (int gi : nl.topo) {
    const Gate& g = nl.gates[gi];
    std::size_t arity = g.inputs.size();
    for (std::size_t p = 0; p < arity; ++p) {
      std::uint8_t v = vals[g.inputs[p]];
      if (fault && fault->site == Fault::Site::Branch && fault->gate == gi &&
          fault->pin == static_cast<int>(p))
        v = static_cast<std::uint8_t>(fault->stuck);
      pins[p] = v;
    }
    std::uint8_t out = apply_gate(g.op, pins, arity);
    if (stem && fault->net == g.output) out = static_cast<std::uint8_t>(fault->stuck);
    vals[g.output] = out;
  }

  std::uint64_t result = 0;
  for (int j = 0; j < nl.num_outputs(); ++j)
    result |= static_cast<std::uint64_t>(vals[nl.outputs[j]]) << j;
  return result;
}

}  // namespace

std::uint64_t Netlist::line_count() const {
  std::uint64_t lines = nets.size();
  for (int f : fanout)
    if (f >= 2) lines += static_cast<std::uint64_t>(f);
  return lines;
}

Netlist parse_netlist(std::string_view text, std::string name) {
  Parser ps;
  std::vector<std::pair<int, int>> output_decls;  // net id, line

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = trim(raw);
    if (line.empty()) continue;

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      // INPUT(...) or OUTPUT(...)
      std::size_t open = line.find('(');
      if (open == std::string_view::npos) fail(line_no, "expected INPUT(...), OUTPUT(...) or '='");
      std::string keyword = upper(trim(line.substr(0, open)));
      auto args = parse_call_args(line, line_no);
      if (args.size() != 1) fail(line_no, keyword + " takes exactly one net name");
      if (!valid_name(args[0])) fail(line_no, "bad net name '" + args[0] + "'");
      if (keyword == "INPUT") {
        int id = ps.touch(args[0], line_no);
        ps.drive(id, line_no);
        if (ps.inputs.size() >= 64) fail(line_no, "too many inputs (limit 64)");
        ps.inputs.push_back(id);
      } else if (keyword == "OUTPUT") {
        int id = ps.touch(args[0], line_no);
        for (auto& [prev, prev_line] : output_decls)
          if (prev == id)
            fail(line_no, "duplicate output declaration for '" + args[0] + "' (first on line " +
                              std::to_string(prev_line) + ")");
        if (output_decls.size() >= 64) fail(line_no, "too many outputs (limit 64)");
        output_decls.emplace_back(id, line_no);
      } else {
        fail(line_no, "unknown keyword '" + keyword + "'");
      }
      continue;
    }

    // <name> = <OP>(args)
    std::string lhs(trim(line.substr(0, eq)));
    if (!valid_name(lhs)) fail(line_no, "bad net name '" + lhs + "'");
    std::string_view rhs = trim(line.substr(eq + 1));
    std::size_t open = rhs.find('(');
    if (open == std::string_view::npos) fail(line_no, "expected gate call after '='");
    std::string opword = upper(trim(rhs.substr(0, open)));
    GateOp op;
    if (!lookup_op(opword, op)) fail(line_no, "unknown gate op '" + opword + "'");
    auto args = parse_call_args(rhs, line_no);
    check_arity(op, args.size(), line_no);

    Gate g;
    g.op = op;
    g.line = line_no;
    for (const std::string& a : args) {
      if (!valid_name(a)) fail(line_no, "bad net name '" + a + "'");
      g.inputs.push_back(ps.touch(a, line_no));
    }
    int id = ps.touch(lhs, line_no);
    ps.drive(id, line_no);
    g.output = id;
    ps.gates.push_back(std::move(g));
  }

  for (const NetRecord& r : ps.nets)
    if (r.driver_line < 0) fail(r.first_ref, "undefined net '" + r.name + "' is never driven");
  if (ps.inputs.empty()) fail(line_no, "netlist declares no inputs");
  if (output_decls.empty()) fail(line_no, "netlist declares no outputs");

  // Re-index nets into definition order so fault enumeration follows it.
  std::vector<int> remap(ps.nets.size());
  for (std::size_t i = 0; i < ps.nets.size(); ++i) remap[i] = ps.nets[i].def_rank;

  Netlist nl;
  nl.name = std::move(name);
  nl.nets.resize(ps.nets.size());
  for (std::size_t i = 0; i < ps.nets.size(); ++i) nl.nets[remap[i]] = ps.nets[i].name;
  for (int id : ps.inputs) nl.inputs.push_back(remap[id]);
  for (auto& [id, line] : output_decls) nl.outputs.push_back(remap[id]);
  nl.gates = std::move(ps.gates);
  for (Gate& g : nl.gates) {
    g.output = remap[g.output];
    for (int& i : g.inputs) i = remap[i];
  }

  nl.fanout.assign(nl.nets.size(), 0);
  for (const Gate& g : nl.gates)
    for (int i : g.inputs) ++nl.fanout[i];

  // Kahn's algorithm over gates; anything left sits on a cycle.
  std::vector<char> ready(nl.nets.size(), 0);
  for (int id : nl.inputs) ready[id] = 1;
  std::vector<char> placed(nl.gates.size(), 0);
  for (;;) {
    bool progress = false;
    for (std::size_t gi = 0; gi < nl.gates.size(); ++gi) {
      if (placed[gi]) continue;
      const Gate& g = nl.gates[gi];
      bool ok = true;
      for (int i : g.inputs)
        if (!ready[i]) { ok = false; break; }
      if (!ok) continue;
      placed[gi] = 1;
      ready[g.output] = 1;
      nl.topo.push_back(static_cast<int>(gi));
      progress = true;
    }
    if (!progress) break;
  }
  if (nl.topo.size() != nl.gates.size()) {
    for (std::size_t gi = 0; gi < nl.gates.size(); ++gi)
      if (!placed[gi])
        fail(nl.gates[gi].line,
             "cycle detected through net '" + nl.nets[nl.gates[gi].output] + "'");
  }
  return nl;
}

Netlist load_netlist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open netlist file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_netlist(buf.str(), path.stem().string());
}

std::uint64_t evaluate(const Netlist& nl, std::uint64_t in) {
  std::vector<std::uint8_t> scratch;
  return evaluate_impl(nl, in, nullptr, scratch);
}

std::uint64_t evaluate(const Netlist& nl, std::uint64_t in, std::vector<std::uint8_t>& scratch) {
  return evaluate_impl(nl, in, nullptr, scratch);
}

std::vector<Fault> enumerate_faults(const Netlist& nl) {
  std::vector<Fault> out;
  out.reserve(2 * nl.line_count());
  for (int net = 0; net < static_cast<int>(nl.nets.size()); ++net) {
    out.push_back(Fault{Fault::Site::Stem, net, -1, -1, 0});
    out.push_back(Fault{Fault::Site::Stem, net, -1, -1, 1});
    if (nl.fanout[net] < 2) continue;
    for (int gi = 0; gi < static_cast<int>(nl.gates.size()); ++gi) {
      const Gate& g = nl.gates[gi];
      for (int p = 0; p < static_cast<int>(g.inputs.size()); ++p) {
        if (g.inputs[p] != net) continue;
        out.push_back(Fault{Fault::Site::Branch, net, gi, p, 0});
        out.push_back(Fault{Fault::Site::Branch, net, gi, p, 1});
      }
    }
  }
  return out;
}

std::uint64_t evaluate_with_fault(const Netlist& nl, std::uint64_t in, const Fault& fault) {
  std::vector<std::uint8_t> scratch;
  return evaluate_impl(nl, in, &fault, scratch);
}

std::uint64_t evaluate_with_fault(const Netlist& nl, std::uint64_t in, const Fault& fault,
                                  std::vector<std::uint8_t>& scratch) {
  return evaluate_impl(nl, in, &fault, scratch);
}

std::string fault_to_string(const Netlist& nl, const Fault& fault) {
  validate_fault(nl, fault);
  std::string site = fault.site == Fault::Site::Stem
                         ? "stem " + nl.nets[fault.net]
                         : "branch " + nl.nets[fault.net] + "->" +
                               nl.nets[nl.gates[fault.gate].output] + "." +
                               std::to_string(fault.pin);
  return site + " s-a-" + std::to_string(fault.stuck);
}

}  // namespace bist
