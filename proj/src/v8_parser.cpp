#include "tracealign/v8_parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

#include "tracealign/errors.hpp"

namespace tracealign {

namespace {

constexpr std::string_view kFunctionHeaderPrefix =
    "[generated bytecode for function:";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

bool is_hex_pair(std::string_view token) {
  return token.size() == 2 &&
         std::isxdigit(static_cast<unsigned char>(token[0])) &&
         std::isxdigit(static_cast<unsigned char>(token[1]));
}

std::optional<std::int64_t> parse_int(std::string_view token) {
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    return std::nullopt;
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) tokens.push_back(s.substr(start, i - start));
  }
  return tokens;
}

std::optional<std::string> match_function_header(std::string_view line) {
  if (!line.starts_with(kFunctionHeaderPrefix)) return std::nullopt;
  std::string_view rest = line.substr(kFunctionHeaderPrefix.size());
  if (auto close = rest.find(']'); close != std::string_view::npos) {
    rest = rest.substr(0, close);
  }
  // Newer dumps append the SharedFunctionInfo address in parentheses.
  if (auto paren = rest.find(" ("); paren != std::string_view::npos) {
    rest = rest.substr(0, paren);
  }
  return std::string(trim(rest));
}

// Jump targets embed an absolute address, `(0x1373c70a12 @ 12)`; only the
// offset survives canonicalization since addresses differ across runs.
std::string canonicalize_operand(std::string_view token) {
  if (token.size() >= 2 && token.front() == '(' && token.back() == ')') {
    std::string_view inner = trim(token.substr(1, token.size() - 2));
    if (inner.starts_with("0x")) {
      if (auto at = inner.find('@'); at != std::string_view::npos) {
        std::string_view offset = trim(inner.substr(at + 1));
        if (parse_int(offset)) return "@" + std::string(offset);
      }
    }
  }
  return std::string(token);
}

// Operands are comma-separated; a parenthesized jump target may ride on the
// same comma piece as its operand, so pieces split further on spaces with
// `(...)` groups kept whole.
std::vector<std::string> parse_operands(std::string_view region) {
  std::vector<std::string> operands;
  std::size_t start = 0;
  while (start <= region.size()) {
    std::size_t comma = region.find(',', start);
    std::string_view piece =
        comma == std::string_view::npos
            ? region.substr(start)
            : region.substr(start, comma - start);
    piece = trim(piece);
    std::size_t i = 0;
    while (i < piece.size()) {
      while (i < piece.size() && piece[i] == ' ') ++i;
      if (i >= piece.size()) break;
      std::size_t token_start = i;
      if (piece[i] == '(') {
        while (i < piece.size() && piece[i] != ')') ++i;
        if (i < piece.size()) ++i;  // include ')'
      } else {
        while (i < piece.size() && piece[i] != ' ') ++i;
      }
      operands.push_back(
          canonicalize_operand(piece.substr(token_start, i - token_start)));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return operands;
}

// Provenance columns left of the ` : ` separator; unknown tokens tolerated.
void parse_prefix(std::string_view prefix, TraceEvent& event) {
  const auto tokens = split_ws(prefix);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string_view token = tokens[i];
    if (token.size() == 2 && (token[0] == 'E' || token[0] == 'S') &&
        token[1] == '>' && i > 0) {
      if (auto offset = parse_int(tokens[i - 1])) {
        event.source_offset = SourceRef{*offset, token[0]};
      }
    } else if (token.starts_with("0x") && !event.address) {
      event.address = std::string(token);
    } else if (token == "@" && i + 1 < tokens.size()) {
      if (auto offset = parse_int(tokens[i + 1])) {
        event.bytecode_offset = *offset;
        ++i;
      }
    }
  }
}

bool is_instruction_candidate(std::string_view line, std::size_t& sep_out) {
  const auto sep = line.find(" : ");
  if (sep == std::string_view::npos) return false;
  const auto tokens = split_ws(line.substr(sep + 3));
  if (tokens.empty() || !is_hex_pair(tokens.front())) return false;
  sep_out = sep;
  return true;
}

}  // namespace

Trace parse_v8_trace(std::istream& in, std::string source) {
  if (!in) throw IoError("cannot read trace stream: " + source);

  Trace trace;
  trace.source = std::move(source);
  std::optional<std::string> current_function;
  std::string line;
  std::uint64_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view stripped = trim(line);
    if (stripped.empty()) continue;

    if (auto name = match_function_header(stripped)) {
      current_function = std::move(*name);
      continue;
    }

    std::size_t sep = 0;
    if (!is_instruction_candidate(stripped, sep)) continue;

    TraceEvent event;
    parse_prefix(stripped.substr(0, sep), event);

    const std::string_view rhs = stripped.substr(sep + 3);
    std::vector<std::uint8_t> bytes;
    std::size_t pos = 0;
    std::size_t mnemonic_start = std::string_view::npos;
    while (pos < rhs.size()) {
      while (pos < rhs.size() && rhs[pos] == ' ') ++pos;
      std::size_t start = pos;
      while (pos < rhs.size() && rhs[pos] != ' ') ++pos;
      if (pos == start) break;
      const std::string_view token = rhs.substr(start, pos - start);
      if (is_hex_pair(token)) {
        bytes.push_back(static_cast<std::uint8_t>(
            std::stoul(std::string(token), nullptr, 16)));
      } else {
        mnemonic_start = start;
        break;
      }
    }

    if (mnemonic_start == std::string_view::npos) {
      throw ParseError("bytecode line has no mnemonic", lineno);
    }
    std::size_t mnemonic_end = mnemonic_start;
    while (mnemonic_end < rhs.size() && rhs[mnemonic_end] != ' ') {
      ++mnemonic_end;
    }
    const std::string_view mnemonic =
        rhs.substr(mnemonic_start, mnemonic_end - mnemonic_start);
    if (!std::isupper(static_cast<unsigned char>(mnemonic.front()))) {
      throw ParseError(
          "expected a mnemonic, found '" + std::string(mnemonic) + "'",
          lineno);
    }

    event.op = std::string(mnemonic);
    event.raw_bytes = std::move(bytes);
    event.operands = parse_operands(rhs.substr(mnemonic_end));
    event.function_name = current_function;
    trace.events.push_back(std::move(event));
  }

  if (in.bad()) throw IoError("I/O failure while reading " + trace.source);
  return trace;
}

Trace parse_trace_file(const std::filesystem::path& path, TraceFormat format) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open trace file: " + path.string());
  std::ostringstream content;
  content << file.rdbuf();
  if (file.bad()) throw IoError("I/O failure while reading " + path.string());
  std::string text = std::move(content).str();

  if (format == TraceFormat::Auto) {
    format = TraceFormat::Debug;
    std::istringstream scan(text);
    std::string line;
    while (std::getline(scan, line)) {
      const std::string_view stripped = trim(line);
      std::size_t sep = 0;
      if (stripped.starts_with(kFunctionHeaderPrefix) ||
          is_instruction_candidate(stripped, sep)) {
        format = TraceFormat::V8;
        break;
      }
    }
  }

  std::istringstream in(std::move(text));
  return format == TraceFormat::V8 ? parse_v8_trace(in, path.string())
                                   : parse_debug(in, path.string());
}

}  // namespace tracealign
