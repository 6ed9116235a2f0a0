#include "tracealign/fastdtw.hpp"

#include <algorithm>

#include "tracealign/errors.hpp"

namespace tracealign {

Trace coarsen(const Trace& t) {
  Trace out;
  out.source = t.source;
  out.events.reserve((t.events.size() + 1) / 2);
  for (std::size_t i = 0; i < t.events.size(); i += 2) {
    out.events.push_back(t.events[i]);
  }
  return out;
}

Band expand_window(const WarpPath& half_res_path, std::uint64_t radius,
                   std::uint64_t n, std::uint64_t m) {
  const std::uint64_t half_n = (n + 1) / 2;
  const std::uint64_t half_m = (m + 1) / 2;
  if (!half_res_path.valid_for(half_n, half_m)) {
    throw ContractError("path is not valid at half resolution");
  }

  // Column span contributed to each fine row by the projected blocks.
  // Coarse event k covers fine events 2k-1 and 2k (1-based), so cell (ci,cj)
  // covers fine rows {2ci-1, 2ci} and columns {2cj-1, 2cj}; border indices
  // (empty prefixes) stay on the border.
  std::vector<RowInterval> span(n + 1, RowInterval{kInfiniteCost, 0});
  for (const auto& [ci, cj] : half_res_path.steps) {
    const std::uint64_t col_lo = cj == 0 ? 0 : std::min(2 * cj - 1, m);
    const std::uint64_t col_hi = cj == 0 ? 0 : std::min(2 * cj, m);
    const std::uint64_t row_lo = ci == 0 ? 0 : std::min(2 * ci - 1, n);
    const std::uint64_t row_hi = ci == 0 ? 0 : std::min(2 * ci, n);
    for (std::uint64_t r = row_lo; r <= row_hi; ++r) {
      span[r].lo = std::min(span[r].lo, col_lo);
      span[r].hi = std::max(span[r].hi, col_hi);
    }
  }

  // Dilate by `radius` (Chebyshev): row i sees rows [i-radius, i+radius].
  // The path visits every coarse row, so every fine span is non-empty, and
  // spans are monotone, so the window extremes sit at the window edges.
  Band band;
  band.rows.resize(n + 1);
  for (std::uint64_t i = 0; i <= n; ++i) {
    const std::uint64_t from = i > radius ? i - radius : 0;
    const std::uint64_t to = std::min(n, saturating_add(i, radius));
    auto& row = band.rows[i];
    row.lo = span[from].lo > radius ? span[from].lo - radius : 0;
    row.hi = std::min(m, saturating_add(span[to].hi, radius));
  }

  // Close diagonal jumps between consecutive intervals by extending rows
  // rightward, as with the diagonal band.
  band.rows.front().lo = 0;
  band.rows.back().hi = m;
  for (std::uint64_t i = n; i-- > 0;) {
    const std::uint64_t next_lo = band.rows[i + 1].lo;
    if (next_lo > 0 && band.rows[i].hi < next_lo - 1) {
      band.rows[i].hi = next_lo - 1;
    }
  }
  band.validate(n, m);
  return band;
}

namespace {

void accumulate(AlignStats& total, const AlignStats& level) {
  total.cells_computed += level.cells_computed;
  total.rows_spilled += level.rows_spilled;
  total.spill_bytes += level.spill_bytes;
  total.backtrack_rows_read += level.backtrack_rows_read;
  total.backtrack_cells_read += level.backtrack_cells_read;
  total.sample_residency(level.peak_resident_cells);
  if (level.backing == Backing::Disk) total.backing = Backing::Disk;
  if (level.cell_width == CellWidth::W8) total.cell_width = CellWidth::W8;
}

AlignmentResult exact_with_path(const Trace& x, const Trace& y,
                                const EventDistance& dist,
                                const StoreConfig& store_config) {
  const std::uint64_t max_step = std::max<std::uint64_t>(
      dist.spec().gap_cost, dist.spec().mismatch_cost);
  AlignmentResult result;
  result.n = x.length();
  result.m = y.length();
  result.difficulty = result.n * result.m;
  auto store = create_store(result.n, result.m, store_config, max_step);
  result.cost = dtw_forward(x, y, dist, *store, &result.stats);
  const std::uint64_t rows_before = store->io().rows_read;
  result.path = backtrack(*store, x, y, dist);
  result.stats.backtrack_rows_read = store->io().rows_read - rows_before;
  result.stats.backtrack_cells_read = store->io().cells_read;
  result.stats.sample_residency(store->resident_cells());
  result.stats.rows_spilled =
      store->backing() == Backing::Disk ? store->io().rows_written : 0;
  result.stats.spill_bytes = store->spill_bytes();
  result.stats.backing = store->backing();
  result.stats.cell_width = store->cell_width();
  return result;
}

AlignmentResult fastdtw_recurse(const Trace& x, const Trace& y,
                                const EventDistance& dist,
                                const FastDtwConfig& config,
                                const StoreConfig& store_config,
                                AlignStats& total) {
  const std::uint64_t n = x.length();
  const std::uint64_t m = y.length();
  if (std::min(n, m) <= config.min_size + config.radius) {
    AlignmentResult base = exact_with_path(x, y, dist, store_config);
    accumulate(total, base.stats);
    return base;
  }

  const Trace cx = coarsen(x);
  const Trace cy = coarsen(y);
  const AlignmentResult coarse =
      fastdtw_recurse(cx, cy, dist, config, store_config, total);
  const Band band = expand_window(*coarse.path, config.radius, n, m);

  const std::uint64_t max_step = std::max<std::uint64_t>(
      dist.spec().gap_cost, dist.spec().mismatch_cost);
  auto store = create_store(n, m, store_config, max_step, band.cell_count(),
                            /*banded=*/true);
  AlignmentResult refined = dtw_banded(x, y, dist, band, *store);
  accumulate(total, refined.stats);
  return refined;
}

}  // namespace

AlignmentResult fastdtw(const Trace& x, const Trace& y,
                        const EventDistance& dist, const FastDtwConfig& config,
                        const StoreConfig& store_config, bool cost_only) {
  const std::uint64_t n = x.length();
  const std::uint64_t m = y.length();

  AlignStats total;
  AlignmentResult result;

  if (std::min(n, m) <= config.min_size + config.radius) {
    if (cost_only) {
      result.n = n;
      result.m = m;
      result.difficulty = n * m;
      result.cost = dtw_cost_only(x, y, dist, &total);
    } else {
      result = fastdtw_recurse(x, y, dist, config, store_config, total);
    }
  } else if (cost_only) {
    const Trace cx = coarsen(x);
    const Trace cy = coarsen(y);
    const AlignmentResult coarse =
        fastdtw_recurse(cx, cy, dist, config, store_config, total);
    const Band band = expand_window(*coarse.path, config.radius, n, m);
    result.n = n;
    result.m = m;
    result.difficulty = n * m;
    result.cost = dtw_banded_cost_only(x, y, dist, band, &total);
  } else {
    result = fastdtw_recurse(x, y, dist, config, store_config, total);
  }

  result.stats = total;
  return result;
}

}  // namespace tracealign
