#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tracealign/trace.hpp"

namespace tracealign {

enum class TraceFormat { Auto, V8, Debug };

// Parses the text output of `--print-bytecode`. Instruction lines follow
//
//   [srcOffset kind>] address @ bcOffset : bytes... Mnemonic operands...
//
// A line is an instruction iff it contains the ` : ` separator followed by
// hex byte pairs and then a mnemonic starting with an uppercase letter.
// Everything else (function headers, `Parameter count 2`, blank lines,
// constant pools) is metadata. Function headers set the function name for
// subsequent events. Throws ParseError (with line number) when a line looks
// like an instruction but carries no mnemonic.
Trace parse_v8_trace(std::istream& in, std::string source = "<stream>");

// Reads a whole file; with TraceFormat::Auto the content is sniffed: any
// instruction-shaped line or function header selects the V8 dump grammar,
// otherwise the event-per-line debug format is assumed.
Trace parse_trace_file(const std::filesystem::path& path,
                       TraceFormat format = TraceFormat::Auto);

}  // namespace tracealign
