#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "tracealign/cost_store.hpp"
#include "tracealign/distance.hpp"
#include "tracealign/trace.hpp"

namespace tracealign {

// Monotone, contiguous index path from (0,0) to (N,M); consecutive steps
// differ by (1,0), (0,1) or (1,1).
struct WarpPath {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> steps;

  bool valid_for(std::uint64_t n, std::uint64_t m) const;
  void write_csv(std::ostream& out) const;
};

struct AlignStats {
  std::uint64_t cells_computed = 0;
  std::uint64_t rows_spilled = 0;
  std::uint64_t spill_bytes = 0;
  std::uint64_t backtrack_rows_read = 0;
  std::uint64_t backtrack_cells_read = 0;
  std::uint64_t peak_resident_cells = 0;
  double wall_time_s = 0.0;
  Backing backing = Backing::Memory;
  CellWidth cell_width = CellWidth::W4;

  void sample_residency(std::uint64_t resident) {
    if (resident > peak_resident_cells) peak_resident_cells = resident;
  }
};

struct AlignmentResult {
  Cost cost = 0;
  std::optional<WarpPath> path;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t difficulty = 0;  // n * m
  AlignStats stats;
};

// Aligned views of both traces: equal length, std::nullopt marks a gap, and
// stripping gaps from either side reproduces the original event order.
struct AlignedTracePair {
  std::vector<std::optional<std::uint64_t>> x_indices;
  std::vector<std::optional<std::uint64_t>> y_indices;

  std::uint64_t columns() const { return x_indices.size(); }
  // Two space-padded lines, gap columns rendered as `-`.
  void render(const Trace& x, const Trace& y, std::ostream& out) const;
};

// Fills the store with the recurrence
//   D[0][j] = gap * j,  D[i][0] = gap * i,
//   D[i][j] = min(D[i-1][j] + gap, D[i][j-1] + gap, D[i-1][j-1] + d(x_i,y_j))
// holding only the current and previous row in memory, and returns D[N][M].
Cost dtw_forward(const Trace& x, const Trace& y, const EventDistance& dist,
                 CostMatrixStore& store, AlignStats* stats = nullptr);

// Same recurrence without any store; the two resident rows run along the
// shorter trace, so memory is 2 * (min(N,M)+1) cells. No path is produced.
Cost dtw_cost_only(const Trace& x, const Trace& y, const EventDistance& dist,
                   AlignStats* stats = nullptr);

// Walks back from (N,M) to (0,0), validating every step against the
// recurrence; ties prefer diagonal, then up (gap in y), then left (gap in x).
WarpPath backtrack(CostMatrixStore& store, const Trace& x, const Trace& y,
                   const EventDistance& dist);

AlignedTracePair apply_path(const Trace& x, const Trace& y,
                            const WarpPath& path);

// Sum of per-step costs along the path; equals the alignment cost for any
// optimal path.
Cost replay_path_cost(const Trace& x, const Trace& y,
                      const EventDistance& dist, const WarpPath& path);

}  // namespace tracealign
