#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tracealign {

// The `30 E>` / `56 S>` provenance column of a bytecode line.
struct SourceRef {
  std::int64_t offset = 0;
  char kind = '?';  // 'E' (expression) or 'S' (statement)

  friend bool operator==(const SourceRef&, const SourceRef&) = default;
};

// One bytecode instruction as printed in a V8 dump. The operator and the
// canonicalized operand list identify the instruction; the remaining columns
// are run-specific provenance and are never compared.
struct TraceEvent {
  std::string op;                      // mnemonic, e.g. LdaNamedProperty
  std::vector<std::string> operands;   // e.g. {"a0", "[0]", "[1]"}

  std::optional<std::vector<std::uint8_t>> raw_bytes;
  std::optional<SourceRef> source_offset;
  std::optional<std::string> address;
  std::optional<std::int64_t> bytecode_offset;
  std::optional<std::string> function_name;

  // True when operator and operand list match; provenance columns ignored.
  bool same_instruction(const TraceEvent& other) const {
    return op == other.op && operands == other.operands;
  }

  // `op operand1 operand2 ...` -- also the debug serialization line.
  std::string canonical_key() const;
};

struct Trace {
  std::vector<TraceEvent> events;
  std::string source = "synthetic";

  std::uint64_t length() const { return events.size(); }
};

struct TraceStats {
  std::uint64_t event_count = 0;
  std::map<std::string, std::uint64_t> operator_histogram;
  std::uint64_t function_count = 0;  // distinct function names seen
};

TraceStats trace_stats(const Trace& t);

// Debug serialization: one event per line, `Mnemonic op1 op2 ...`, UTF-8.
void serialize_debug(const Trace& t, std::ostream& out);
Trace parse_debug(std::istream& in, std::string source = "<debug>");

Trace concat_traces(const Trace& a, const Trace& b);

}  // namespace tracealign
