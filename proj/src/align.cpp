#include "tracealign/align.hpp"

#include <algorithm>
#include <chrono>

#include "tracealign/errors.hpp"

namespace tracealign {

namespace {

std::uint64_t max_step_cost(const DistanceSpec& spec) {
  return std::max<std::uint64_t>(spec.gap_cost, spec.mismatch_cost);
}

AlignmentResult run_exact(const Trace& x, const Trace& y,
                          const EventDistance& dist,
                          const AlignConfig& config) {
  AlignmentResult result;
  result.n = x.length();
  result.m = y.length();
  result.difficulty = result.n * result.m;

  if (config.cost_only) {
    result.cost = dtw_cost_only(x, y, dist, &result.stats);
    return result;
  }

  auto store = create_store(result.n, result.m, config.store,
                            max_step_cost(dist.spec()));
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

AlignmentResult run_banded(const Trace& x, const Trace& y,
                           const EventDistance& dist,
                           const AlignConfig& config) {
  const Band band = sakoe_band(x.length(), y.length(), config.band_width);
  if (config.cost_only) {
    AlignmentResult result;
    result.n = x.length();
    result.m = y.length();
    result.difficulty = result.n * result.m;
    result.cost = dtw_banded_cost_only(x, y, dist, band, &result.stats);
    return result;
  }
  auto store =
      create_store(x.length(), y.length(), config.store,
                   max_step_cost(dist.spec()), band.cell_count(),
                   /*banded=*/true);
  return dtw_banded(x, y, dist, band, *store);
}

}  // namespace

AlignOutcome align(const Trace& x, const Trace& y, const AlignConfig& config) {
  if (config.cost_only && config.want_aligned) {
    throw ConfigError("cost-only mode cannot produce an aligned trace pair");
  }
  const EventDistance dist = make_distance(config.distance, config.custom);

  const auto start = std::chrono::steady_clock::now();
  AlignmentResult result;
  switch (config.mode) {
    case AlignMode::Exact:
      result = run_exact(x, y, dist, config);
      break;
    case AlignMode::Banded:
      result = run_banded(x, y, dist, config);
      break;
    case AlignMode::FastDtw:
      result = fastdtw(x, y, dist, config.fastdtw, config.store,
                       config.cost_only);
      break;
  }
  const auto end = std::chrono::steady_clock::now();
  result.stats.wall_time_s =
      std::chrono::duration<double>(end - start).count();

  AlignOutcome outcome;
  if (config.want_aligned && result.path) {
    outcome.aligned = apply_path(x, y, *result.path);
  }
  outcome.result = std::move(result);
  return outcome;
}

}  // namespace tracealign
