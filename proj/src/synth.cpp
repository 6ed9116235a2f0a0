#include "tracealign/synth.hpp"

#include <random>
#include <utility>
#include <vector>

#include "tracealign/errors.hpp"

namespace tracealign {

Trace synth_trace(const SynthSpec& spec) {
  if (spec.alphabet_size == 0) {
    throw ConfigError("synthetic alphabet must have at least one operator");
  }
  Trace t;
  t.source = "synthetic";
  t.events.reserve(spec.length);
  std::mt19937_64 rng(spec.seed);
  for (std::uint64_t i = 0; i < spec.length; ++i) {
    TraceEvent event;
    // rng() % k instead of uniform_int_distribution: the latter is not
    // bit-stable across standard library implementations.
    event.op = "op" + std::to_string(rng() % spec.alphabet_size);
    t.events.push_back(std::move(event));
  }
  return t;
}

Trace shuffle_blocks(const Trace& t, std::span<const std::uint64_t> boundaries,
                     std::uint64_t seed) {
  const std::uint64_t n = t.length();
  std::uint64_t prev = 0;
  bool first = true;
  for (const std::uint64_t b : boundaries) {
    if (b > n || (!first && b <= prev)) {
      throw std::invalid_argument(
          "block boundaries must be strictly increasing and within the trace");
    }
    prev = b;
    first = false;
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
  std::uint64_t start = 0;
  for (const std::uint64_t b : boundaries) {
    if (b > start) blocks.emplace_back(start, b);
    start = b;
  }
  if (n > start || blocks.empty()) blocks.emplace_back(start, n);

  std::mt19937_64 rng(seed);
  for (std::size_t i = blocks.size() - 1; i > 0; --i) {
    std::swap(blocks[i], blocks[rng() % (i + 1)]);
  }

  Trace out;
  out.source = t.source;
  out.events.reserve(n);
  for (const auto& [lo, hi] : blocks) {
    out.events.insert(out.events.end(), t.events.begin() + lo,
                      t.events.begin() + hi);
  }
  return out;
}

}  // namespace tracealign
