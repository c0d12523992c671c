#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bist {

enum class GateOp { And, Or, Nand, Nor, Xor, Xnor, Not, Buf };

struct Gate {
  int output = -1;          // driven net id
  GateOp op = GateOp::Buf;
  std::vector<int> inputs;  // net ids, pin order as written
  int line = 0;             // source line, for messages
};

// Gate-level combinational netlist.  Net ids follow definition order: the
// statement that drives a net (INPUT or gate line) assigns its id, so id
// order is the fault-enumeration order.  Declared input order binds input i
// to pattern bit i-1 (generator stage q_i); declared output order binds
// output j to response bit j-1 (signature tap D_j).
struct Netlist {
  std::string name;
  std::vector<std::string> nets;
  std::vector<int> inputs;    // net ids, declaration order
  std::vector<int> outputs;   // net ids, declaration order
  std::vector<Gate> gates;    // declaration order
  std::vector<int> topo;      // gate indices in evaluation order
  std::vector<int> fanout;    // per net: count of gate input pins it feeds

  int num_inputs() const { return static_cast<int>(inputs.size()); }
  int num_outputs() const { return static_cast<int>(outputs.size()); }

  // Stuck-at line universe: one stem per net, plus one branch per receiving
  // pin on nets with fanout >= 2.
  std::uint64_t line_count() const;
};

// Bench-style source:
//   INPUT(<name>) | OUTPUT(<name>) | <name> = <OP>(<name>{, <name>})
// with ops AND, OR, NAND, NOR, XOR, XNOR, NOT, BUF; '#' starts a comment;
// keywords are case-insensitive, net names are not.  Validation (undefined
// net, duplicate driver, cycle, bad arity, unknown op) throws ParseError
// carrying the 1-based line number.
Netlist parse_netlist(std::string_view text, std::string name = "netlist");

// Reads and parses a file; the netlist name is the file stem.
Netlist load_netlist(const std::filesystem::path& path);

// Evaluates the fault-free netlist.  Bit i-1 of `in` is input i; bit j-1 of
// the result is output j.  Throws DomainError if `in` has bits past the
// declared inputs.
std::uint64_t evaluate(const Netlist& nl, std::uint64_t in);
std::uint64_t evaluate(const Netlist& nl, std::uint64_t in, std::vector<std::uint8_t>& scratch);

// Single stuck-at fault.  A stem fault forces the value every receiver and
// output sees; a branch fault forces the value read by one gate input pin
// and exists only on nets feeding two or more pins.
struct Fault {
  enum class Site { Stem, Branch };
  Site site = Site::Stem;
  int net = -1;   // always set (for branches: the net the pin reads)
  int gate = -1;  // branch only
  int pin = -1;   // branch only
  int stuck = 0;  // stuck-at value, 0 or 1

  friend bool operator==(const Fault&, const Fault&) = default;
};

// Uncollapsed universe in definition order: for each net, stem s-a-0 then
// s-a-1, then each fanout branch in (gate, pin) order, s-a-0 then s-a-1.
// Size is 2 * line_count().
std::vector<Fault> enumerate_faults(const Netlist& nl);

// Evaluation with one injected fault; rejects faults that do not belong to
// this netlist's universe.
std::uint64_t evaluate_with_fault(const Netlist& nl, std::uint64_t in, const Fault& fault);
std::uint64_t evaluate_with_fault(const Netlist& nl, std::uint64_t in, const Fault& fault,
                                  std::vector<std::uint8_t>& scratch);

std::string fault_to_string(const Netlist& nl, const Fault& fault);

}  // namespace bist
