#include "tracealign/dtw.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "tracealign/errors.hpp"

namespace tracealign {

namespace {

Cost min3(Cost a, Cost b, Cost c) { return std::min(a, std::min(b, c)); }

// Core row sweep shared by the stored and cost-only variants. RowSink is
// called with (row index, row span) after each completed row.
template <typename StepCost, typename RowSink>
Cost forward_sweep(std::uint64_t n, std::uint64_t m, Cost gap,
                   StepCost&& step_cost, RowSink&& sink) {
  std::vector<Cost> prev(m + 1);
  std::vector<Cost> curr(m + 1);
  for (std::uint64_t j = 0; j <= m; ++j) curr[j] = gap * j;
  sink(0, std::span<const Cost>(curr));
  curr.swap(prev);
  for (std::uint64_t i = 1; i <= n; ++i) {
    curr[0] = gap * i;
    for (std::uint64_t j = 1; j <= m; ++j) {
      curr[j] = min3(prev[j] + gap, curr[j - 1] + gap,
                     prev[j - 1] + step_cost(i - 1, j - 1));
    }
    sink(i, std::span<const Cost>(curr));
    curr.swap(prev);
  }
  return prev[m];
}

// Plain additions in forward_sweep are exact only while every reachable cell
// stays clear of the saturation range.
void check_value_headroom(std::uint64_t n, std::uint64_t m,
                          const DistanceSpec& spec) {
  const std::uint64_t max_step =
      std::max<std::uint64_t>(spec.gap_cost, spec.mismatch_cost);
  const unsigned __int128 bound =
      static_cast<unsigned __int128>(n + m) * max_step;
  if (bound >= kInfiniteCost / 2) {
    throw ConfigError("cost parameters too large for these trace lengths");
  }
}

template <typename StepCost>
Cost forward_dispatch(const Trace& x, const Trace& y,
                      const EventDistance& dist, CostMatrixStore* store,
                      AlignStats* stats, StepCost&& step_cost) {
  const std::uint64_t n = x.length();
  const std::uint64_t m = y.length();
  check_value_headroom(n, m, dist.spec());
  const Cost result = forward_sweep(
      n, m, dist.spec().gap_cost, step_cost,
      [&](std::uint64_t i, std::span<const Cost> row) {
        if (store != nullptr) store->write_row(i, 0, row);
        if (stats != nullptr) {
          stats->cells_computed += row.size();
          stats->sample_residency(2 * (m + 1) +
                                  (store ? store->resident_cells() : 0));
        }
      });
  return result;
}

Cost run_forward(const Trace& x, const Trace& y, const EventDistance& dist,
                 CostMatrixStore* store, AlignStats* stats) {
  if (dist.keyable()) {
    std::vector<std::uint32_t> kx, ky;
    dist.build_keys(x, y, kx, ky);
    const Cost match = dist.spec().match_cost;
    const Cost mismatch = dist.spec().mismatch_cost;
    return forward_dispatch(x, y, dist, store, stats,
                            [&](std::uint64_t i, std::uint64_t j) {
                              return kx[i] == ky[j] ? match : mismatch;
                            });
  }
  return forward_dispatch(x, y, dist, store, stats,
                          [&](std::uint64_t i, std::uint64_t j) {
                            return dist(x.events[i], y.events[j]);
                          });
}

}  // namespace

bool WarpPath::valid_for(std::uint64_t n, std::uint64_t m) const {
  if (steps.empty()) return false;
  if (steps.front() != std::pair<std::uint64_t, std::uint64_t>{0, 0}) {
    return false;
  }
  if (steps.back() != std::pair<std::uint64_t, std::uint64_t>{n, m}) {
    return false;
  }
  for (std::size_t k = 1; k < steps.size(); ++k) {
    const std::uint64_t di = steps[k].first - steps[k - 1].first;
    const std::uint64_t dj = steps[k].second - steps[k - 1].second;
    if (steps[k].first < steps[k - 1].first ||
        steps[k].second < steps[k - 1].second || di > 1 || dj > 1 ||
        (di == 0 && dj == 0)) {
      return false;
    }
  }
  return true;
}

void WarpPath::write_csv(std::ostream& out) const {
  out << "i,j\n";
  for (const auto& [i, j] : steps) out << i << ',' << j << '\n';
}

Cost dtw_forward(const Trace& x, const Trace& y, const EventDistance& dist,
                 CostMatrixStore& store, AlignStats* stats) {
  if (store.rows() != x.length() + 1 || store.cols() != y.length() + 1) {
    throw ContractError("store shape does not match the trace lengths");
  }
  return run_forward(x, y, dist, &store, stats);
}

Cost dtw_cost_only(const Trace& x, const Trace& y, const EventDistance& dist,
                   AlignStats* stats) {
  // Rows run along the longer trace so the two resident rows are as short
  // as possible; SEN/INST/custom distances are symmetric, so the cost is
  // unchanged under transposition.
  const bool transpose = y.length() > x.length();
  const Trace& a = transpose ? y : x;
  const Trace& b = transpose ? x : y;
  return run_forward(a, b, dist, nullptr, stats);
}

WarpPath backtrack(CostMatrixStore& store, const Trace& x, const Trace& y,
                   const EventDistance& dist) {
  const std::uint64_t n = store.rows() - 1;
  const std::uint64_t m = store.cols() - 1;
  if (x.length() != n || y.length() != m) {
    throw ContractError("traces do not match the store shape");
  }
  const Cost gap = dist.spec().gap_cost;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> reversed;
  reversed.reserve(n + m + 1);
  std::uint64_t i = n;
  std::uint64_t j = m;
  Cost value = store.read_cell(n, m);
  reversed.emplace_back(i, j);

  while (i != 0 || j != 0) {
    bool moved = false;
    if (i > 0 && j > 0) {
      const Cost diag = store.read_cell(i - 1, j - 1);
      const Cost step = dist(x.events[i - 1], y.events[j - 1]);
      if (saturating_add(diag, step) == value) {
        value = diag;
        --i;
        --j;
        moved = true;
      }
    }
    if (!moved && i > 0) {
      const Cost up = store.read_cell(i - 1, j);
      if (saturating_add(up, gap) == value) {
        value = up;
        --i;
        moved = true;
      }
    }
    if (!moved && j > 0) {
      const Cost left = store.read_cell(i, j - 1);
      if (saturating_add(left, gap) == value) {
        value = left;
        --j;
        moved = true;
      }
    }
    if (!moved) {
      throw CorruptionError("no neighbor explains cell (" + std::to_string(i) +
                            ", " + std::to_string(j) +
                            "); the cost matrix is damaged");
    }
    reversed.emplace_back(i, j);
  }

  WarpPath path;
  path.steps.assign(reversed.rbegin(), reversed.rend());
  return path;
}

AlignedTracePair apply_path(const Trace& x, const Trace& y,
                            const WarpPath& path) {
  if (!path.valid_for(x.length(), y.length())) {
    throw ContractError("warp path is not valid for these traces");
  }
  AlignedTracePair aligned;
  aligned.x_indices.reserve(path.steps.size() - 1);
  aligned.y_indices.reserve(path.steps.size() - 1);
  for (std::size_t k = 1; k < path.steps.size(); ++k) {
    const auto& [i, j] = path.steps[k];
    const bool advance_x = i > path.steps[k - 1].first;
    const bool advance_y = j > path.steps[k - 1].second;
    aligned.x_indices.push_back(
        advance_x ? std::optional<std::uint64_t>{i - 1} : std::nullopt);
    aligned.y_indices.push_back(
        advance_y ? std::optional<std::uint64_t>{j - 1} : std::nullopt);
  }
  return aligned;
}

void AlignedTracePair::render(const Trace& x, const Trace& y,
                              std::ostream& out) const {
  std::string top, bottom;
  for (std::size_t k = 0; k < x_indices.size(); ++k) {
    const std::string a =
        x_indices[k] ? x.events[*x_indices[k]].canonical_key() : "-";
    const std::string b =
        y_indices[k] ? y.events[*y_indices[k]].canonical_key() : "-";
    const std::size_t width = std::max(a.size(), b.size());
    if (k > 0) {
      top += ' ';
      bottom += ' ';
    }
    top += a + std::string(width - a.size(), ' ');
    bottom += b + std::string(width - b.size(), ' ');
  }
  out << top << '\n' << bottom << '\n';
}

Cost replay_path_cost(const Trace& x, const Trace& y,
                      const EventDistance& dist, const WarpPath& path) {
  if (!path.valid_for(x.length(), y.length())) {
    throw ContractError("warp path is not valid for these traces");
  }
  const Cost gap = dist.spec().gap_cost;
  Cost total = 0;
  for (std::size_t k = 1; k < path.steps.size(); ++k) {
    const auto& [i, j] = path.steps[k];
    const bool advance_x = i > path.steps[k - 1].first;
    const bool advance_y = j > path.steps[k - 1].second;
    if (advance_x && advance_y) {
      total = saturating_add(total, dist(x.events[i - 1], y.events[j - 1]));
    } else {
      total = saturating_add(total, gap);
    }
  }
  return total;
}

}  // namespace tracealign
