#pragma once

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tracealign/distance.hpp"
#include "tracealign/trace.hpp"

namespace test_helpers {

// One event per character; handy for compact symbolic examples.
inline tracealign::Trace trace_from_symbols(std::string_view symbols) {
  tracealign::Trace t;
  t.source = "symbols:" + std::string(symbols);
  for (const char c : symbols) {
    tracealign::TraceEvent e;
    e.op = std::string(1, c);
    t.events.push_back(std::move(e));
  }
  return t;
}

// Random events where operator and operand list vary independently, so the
// instruction-identity and operator-only distances genuinely differ.
inline tracealign::Trace random_trace(std::uint64_t length,
                                      std::uint32_t alphabet,
                                      std::uint64_t seed) {
  static const std::vector<std::vector<std::string>> kOperandVariants = {
      {}, {"r0"}, {"[0]"}, {"r0", "[1]"}};
  tracealign::Trace t;
  t.source = "random";
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < length; ++i) {
    tracealign::TraceEvent e;
    e.op = "op" + std::to_string(rng() % alphabet);
    e.operands = kOperandVariants[rng() % kOperandVariants.size()];
    t.events.push_back(std::move(e));
  }
  return t;
}

// Cost matrix for aligning "abcababc" against "aabaca" with gap 1 and a
// 0/2 match/mismatch distance, computed by hand from the recurrence. The
// bottom-right cell (the alignment cost) is 4.
inline const std::vector<std::vector<tracealign::Cost>> kSymbolicMatrix = {
    {0, 1, 2, 3, 4, 5, 6},
    {1, 0, 1, 2, 3, 4, 5},
    {2, 1, 2, 1, 2, 3, 4},
    {3, 2, 3, 2, 3, 2, 3},
    {4, 3, 2, 3, 2, 3, 2},
    {5, 4, 3, 2, 3, 4, 3},
    {6, 5, 4, 3, 2, 3, 4},
    {7, 6, 5, 4, 3, 4, 5},
    {8, 7, 6, 5, 4, 3, 4},
};

// The bytecode listing for `function plusOne(a){ return a.value + 1; }`
// exactly as V8 prints it with --print-bytecode.
inline constexpr const char* kSampleListing =
    "[generated bytecode for function: plusOne]\n"
    "Parameter count 2\n"
    "Register count 0\n"
    "Frame size 0\n"
    "30 E> 0x1373c709b6 @    0 : a5 00 00 00       StackCheck \n"
    "56 S> 0x1373c709b7 @    1 : 28 02 00 01       LdaNamedProperty a0, [0], "
    "[1]\n"
    "62 E> 0x1373c709bb @    5 : 40 01 00 00       AddSmi [1], [0]\n"
    "66 S> 0x1373c709be @    8 : a9 00 00 00       Return \n";

}  // namespace test_helpers
