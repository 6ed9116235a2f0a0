#pragma once

#include <cstdint>

#include "tracealign/band.hpp"
#include "tracealign/cost_store.hpp"
#include "tracealign/dtw.hpp"

namespace tracealign {

struct FastDtwConfig {
  std::uint64_t radius = 1;
  std::uint64_t min_size = 16;  // below this, exact DTW is used directly
};

// Keep-first coarsening: output event k is input event 2k, so the result has
// ceil(|t|/2) events. Bytecode events cannot be averaged, so halving keeps a
// representative instead.
Trace coarsen(const Trace& t);

// Projects a warp path found at half resolution onto the full-resolution
// matrix: each coarse cell maps to its 2x2 block of fine cells, the union is
// dilated by `radius` in every direction, clipped, and closed into
// contiguous row intervals containing (0,0) and (n,m).
Band expand_window(const WarpPath& half_res_path, std::uint64_t radius,
                   std::uint64_t n, std::uint64_t m);

// Multiresolution approximation: recursively solves coarsened traces, then
// refines through a radius-dilated window at each resolution. Linear time
// and space for a fixed radius; the returned cost is an upper bound on the
// exact cost and its path replays to exactly that cost.
AlignmentResult fastdtw(const Trace& x, const Trace& y,
                        const EventDistance& dist, const FastDtwConfig& config,
                        const StoreConfig& store_config,
                        bool cost_only = false);

}  // namespace tracealign
