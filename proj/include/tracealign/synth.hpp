#pragma once

#include <cstdint>
#include <span>

#include "tracealign/trace.hpp"

namespace tracealign {

// Deterministic generator input for tests and benchmarks.
struct SynthSpec {
  std::uint64_t length = 0;
  std::uint32_t alphabet_size = 1;  // operators op0 .. op{k-1}
  std::uint64_t seed = 0;
};

// Pure function of its spec: identical specs yield identical traces.
Trace synth_trace(const SynthSpec& spec);

// Permutes the blocks delimited by `boundaries` (interior split points in
// [0, length], strictly increasing; 0 and length are implied). The event
// multiset and total length are preserved; deterministic per seed.
Trace shuffle_blocks(const Trace& t, std::span<const std::uint64_t> boundaries,
                     std::uint64_t seed);

}  // namespace tracealign
