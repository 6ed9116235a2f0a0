#pragma once

#include <cstdint>
#include <vector>

#include "tracealign/dtw.hpp"

namespace tracealign {

struct RowInterval {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  std::uint64_t width() const { return hi - lo + 1; }
  bool contains(std::uint64_t j) const { return j >= lo && j <= hi; }
  friend bool operator==(const RowInterval&, const RowInterval&) = default;
};

// Per-row column intervals restricting which cells the recurrence evaluates.
// Valid bands have non-empty intervals within [0, M], non-decreasing lo/hi,
// step-connected rows (lo[i] <= hi[i-1] + 1), and contain (0,0) and (N,M).
struct Band {
  std::vector<RowInterval> rows;

  std::uint64_t cell_count() const;
  void validate(std::uint64_t n, std::uint64_t m) const;  // throws ConfigError
};

Band full_band(std::uint64_t n, std::uint64_t m);

// Band of half-width `width` around the straight line from (0,0) to (n,m),
// clipped to the matrix and closed so that a path always exists.
Band sakoe_band(std::uint64_t n, std::uint64_t m, std::uint64_t width);

// Evaluates the recurrence only inside the band; out-of-band neighbors count
// as unreachable. The returned cost is an upper bound on the exact cost,
// with equality whenever an optimal path lies entirely inside the band.
AlignmentResult dtw_banded(const Trace& x, const Trace& y,
                           const EventDistance& dist, const Band& band,
                           CostMatrixStore& store);

Cost dtw_banded_cost_only(const Trace& x, const Trace& y,
                          const EventDistance& dist, const Band& band,
                          AlignStats* stats = nullptr);

}  // namespace tracealign
