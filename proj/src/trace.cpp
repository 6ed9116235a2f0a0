#include "tracealign/trace.hpp"

#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace tracealign {

std::string TraceEvent::canonical_key() const {
  std::string key = op;
  for (const auto& operand : operands) {
    key += ' ';
    key += operand;
  }
  return key;
}

TraceStats trace_stats(const Trace& t) {
  TraceStats stats;
  stats.event_count = t.length();
  std::set<std::string> functions;
  for (const auto& e : t.events) {
    ++stats.operator_histogram[e.op];
    if (e.function_name) functions.insert(*e.function_name);
  }
  stats.function_count = functions.size();
  return stats;
}

void serialize_debug(const Trace& t, std::ostream& out) {
  for (const auto& e : t.events) {
    out << e.canonical_key() << '\n';
  }
}

Trace parse_debug(std::istream& in, std::string source) {
  Trace t;
  t.source = std::move(source);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream tokens(line);
    std::string token;
    TraceEvent event;
    bool first = true;
    while (tokens >> token) {
      if (first) {
        event.op = token;
        first = false;
      } else {
        event.operands.push_back(token);
      }
    }
    if (!first) t.events.push_back(std::move(event));
  }
  return t;
}

Trace concat_traces(const Trace& a, const Trace& b) {
  Trace t;
  t.source = a.source;
  t.events.reserve(a.events.size() + b.events.size());
  t.events.insert(t.events.end(), a.events.begin(), a.events.end());
  t.events.insert(t.events.end(), b.events.begin(), b.events.end());
  return t;
}

}  // namespace tracealign
