#include "tracealign/band.hpp"

#include <algorithm>
#include <string>

#include "tracealign/errors.hpp"

namespace tracealign {

std::uint64_t Band::cell_count() const {
  std::uint64_t total = 0;
  for (const auto& row : rows) total += row.width();
  return total;
}

void Band::validate(std::uint64_t n, std::uint64_t m) const {
  if (rows.size() != n + 1) {
    throw ConfigError("band has " + std::to_string(rows.size()) +
                      " rows, expected " + std::to_string(n + 1));
  }
  if (rows.front().lo != 0) {
    throw ConfigError("band excludes the start cell (0,0)");
  }
  if (rows.back().hi != m) {
    throw ConfigError("band excludes the end cell (N,M)");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.lo > row.hi || row.hi > m) {
      throw ConfigError("band row " + std::to_string(i) +
                        " has an invalid interval");
    }
    if (i > 0) {
      const auto& prev = rows[i - 1];
      if (row.lo < prev.lo || row.hi < prev.hi) {
        throw ConfigError("band intervals must be non-decreasing");
      }
      if (row.lo > prev.hi + 1) {
        throw ConfigError("band row " + std::to_string(i) +
                          " is disconnected from the previous row");
      }
    }
  }
}

Band full_band(std::uint64_t n, std::uint64_t m) {
  Band band;
  band.rows.assign(n + 1, RowInterval{0, m});
  return band;
}

Band sakoe_band(std::uint64_t n, std::uint64_t m, std::uint64_t width) {
  Band band;
  band.rows.resize(n + 1);
  for (std::uint64_t i = 0; i <= n; ++i) {
    // Nearest column on the (0,0)-(n,m) line, round half up.
    const std::uint64_t center = n == 0 ? m : (2 * i * m + n) / (2 * n);
    auto& row = band.rows[i];
    row.lo = center > width ? center - width : 0;
    row.hi = std::min(m, center + width);
  }
  band.rows.front().lo = 0;
  band.rows.back().hi = m;
  // Close gaps between consecutive intervals (slope > 2*width+1) by
  // extending rows rightward; extending never discards in-band cells.
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

Cost in(const std::vector<Cost>& row, const RowInterval& iv, std::uint64_t j) {
  return iv.contains(j) ? row[j - iv.lo] : kInfiniteCost;
}

template <typename StepCost, typename RowSink>
Cost banded_sweep(std::uint64_t n, std::uint64_t m, Cost gap, const Band& band,
                  StepCost&& step_cost, RowSink&& sink) {
  std::vector<Cost> prev;
  std::vector<Cost> curr;
  RowInterval prev_iv{};

  for (std::uint64_t i = 0; i <= n; ++i) {
    const RowInterval iv = band.rows[i];
    curr.assign(iv.width(), kInfiniteCost);
    for (std::uint64_t j = iv.lo; j <= iv.hi; ++j) {
      Cost value;
      if (i == 0) {
        value = saturating_mul(gap, j);  // row 0 starts at column 0
      } else if (j == 0) {
        value = saturating_mul(gap, i);
      } else {
        const Cost up = saturating_add(in(prev, prev_iv, j), gap);
        const Cost left =
            saturating_add(j > iv.lo ? curr[j - 1 - iv.lo] : kInfiniteCost,
                           gap);
        const Cost diag = saturating_add(in(prev, prev_iv, j - 1),
                                         step_cost(i - 1, j - 1));
        value = std::min(up, std::min(left, diag));
      }
      curr[j - iv.lo] = value;
    }
    sink(i, iv, std::span<const Cost>(curr));
    prev.swap(curr);
    prev_iv = iv;
  }
  (void)m;
  return prev.back();
}

template <typename Run>
Cost banded_run(const Trace& x, const Trace& y, const EventDistance& dist,
                const Band& band, Run&& run) {
  if (dist.keyable()) {
    std::vector<std::uint32_t> kx, ky;
    dist.build_keys(x, y, kx, ky);
    const Cost match = dist.spec().match_cost;
    const Cost mismatch = dist.spec().mismatch_cost;
    return run([&, kx = std::move(kx), ky = std::move(ky)](
                   std::uint64_t i, std::uint64_t j) {
      return kx[i] == ky[j] ? match : mismatch;
    });
  }
  return run([&](std::uint64_t i, std::uint64_t j) {
    return dist(x.events[i], y.events[j]);
  });
}

}  // namespace

AlignmentResult dtw_banded(const Trace& x, const Trace& y,
                           const EventDistance& dist, const Band& band,
                           CostMatrixStore& store) {
  const std::uint64_t n = x.length();
  const std::uint64_t m = y.length();
  band.validate(n, m);
  if (store.rows() != n + 1 || store.cols() != m + 1) {
    throw ContractError("store shape does not match the trace lengths");
  }

  AlignmentResult result;
  result.n = n;
  result.m = m;
  result.difficulty = n * m;

  result.cost = banded_run(
      x, y, dist, band, [&](auto&& step_cost) {
        return banded_sweep(
            n, m, dist.spec().gap_cost, band, step_cost,
            [&](std::uint64_t i, const RowInterval& iv,
                std::span<const Cost> cells) {
              store.write_row(i, iv.lo, cells);
              result.stats.cells_computed += cells.size();
              const std::uint64_t buffers =
                  iv.width() + (i > 0 ? band.rows[i - 1].width() : 0);
              result.stats.sample_residency(buffers + store.resident_cells());
            });
      });
  if (result.cost == kInfiniteCost) {
    throw CorruptionError("band admits no path despite validation");
  }

  const std::uint64_t rows_before = store.io().rows_read;
  const std::uint64_t cells_before = store.io().cells_read;
  result.path = backtrack(store, x, y, dist);
  result.stats.backtrack_rows_read = store.io().rows_read - rows_before;
  result.stats.backtrack_cells_read = store.io().cells_read - cells_before;
  result.stats.sample_residency(store.resident_cells());
  result.stats.rows_spilled =
      store.backing() == Backing::Disk ? store.io().rows_written : 0;
  result.stats.spill_bytes = store.spill_bytes();
  result.stats.backing = store.backing();
  result.stats.cell_width = store.cell_width();
  return result;
}

Cost dtw_banded_cost_only(const Trace& x, const Trace& y,
                          const EventDistance& dist, const Band& band,
                          AlignStats* stats) {
  const std::uint64_t n = x.length();
  const std::uint64_t m = y.length();
  band.validate(n, m);
  return banded_run(x, y, dist, band, [&](auto&& step_cost) {
    return banded_sweep(n, m, dist.spec().gap_cost, band, step_cost,
                        [&](std::uint64_t i, const RowInterval& iv,
                            std::span<const Cost> cells) {
                          if (stats != nullptr) {
                            stats->cells_computed += cells.size();
                            const std::uint64_t buffers =
                                iv.width() +
                                (i > 0 ? band.rows[i - 1].width() : 0);
                            stats->sample_residency(buffers);
                          }
                        });
  });
}

}  // namespace tracealign
