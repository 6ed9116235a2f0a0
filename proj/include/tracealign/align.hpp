#pragma once

#include <cstdint>
#include <optional>

#include "tracealign/band.hpp"
#include "tracealign/cost_store.hpp"
#include "tracealign/distance.hpp"
#include "tracealign/dtw.hpp"
#include "tracealign/fastdtw.hpp"

namespace tracealign {

enum class AlignMode { Exact, Banded, FastDtw };

struct AlignConfig {
  DistanceSpec distance;
  EventDistance::CustomFn custom;
  AlignMode mode = AlignMode::Exact;
  std::uint64_t band_width = 0;  // banded mode
  FastDtwConfig fastdtw;
  StoreConfig store;
  bool cost_only = false;      // skip backtracking; never spills
  bool want_aligned = false;   // also produce the gapped trace pair
};

struct AlignOutcome {
  AlignmentResult result;
  std::optional<AlignedTracePair> aligned;
};

// End-to-end alignment: store creation (auto backing and cell width),
// forward pass, backtracking and aligned-pair emission as configured.
AlignOutcome align(const Trace& x, const Trace& y,
                   const AlignConfig& config = {});

}  // namespace tracealign
