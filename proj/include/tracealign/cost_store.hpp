#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>

#include "tracealign/distance.hpp"

namespace tracealign {

enum class Backing { Memory, Disk };
enum class BackingChoice { Auto, Memory, Disk };

enum class CellWidth : std::uint32_t { W4 = 4, W8 = 8 };
enum class CellWidthChoice { Auto, W4, W8 };

// Spill-file layout. 24-byte little-endian header:
//   magic "STRC" | version u32 | rows u64 | cols u32 | cell_width u32
// Dense layout (version 1): rows in increasing order, each cell an unsigned
// little-endian integer of cell_width bytes; row i starts at byte offset
// header + i * cols * cell_width.
// Banded layout (version 2): rows in increasing order, each prefixed with
// its column interval as lo u32, hi u32, followed by the hi-lo+1 cells.
inline constexpr char kSpillMagic[4] = {'S', 'T', 'R', 'C'};
inline constexpr std::uint32_t kSpillVersionDense = 1;
inline constexpr std::uint32_t kSpillVersionBanded = 2;
inline constexpr std::uint64_t kSpillHeaderBytes = 24;

struct StoreBudgets {
  std::uint64_t memory_bytes = 512ull << 20;
  std::uint64_t disk_bytes = 0;  // 0 = unlimited
};

struct StoreConfig {
  BackingChoice backing = BackingChoice::Auto;
  CellWidthChoice cell_width = CellWidthChoice::Auto;
  std::filesystem::path workdir;  // empty: $TRACEALIGN_WORKDIR or system tmp
  StoreBudgets budgets;
  bool keep_matrix = false;
};

struct IoCounters {
  std::uint64_t rows_written = 0;
  std::uint64_t cells_written = 0;
  std::uint64_t rows_read = 0;  // distinct row fetches from the backing
  std::uint64_t cells_read = 0;
};

// Row-oriented storage of the (N+1) x (M+1) cost matrix. Rows must be
// written in increasing order, each exactly once; cells of written rows can
// then be read back bit-exactly. Reads on the disk backing are served
// through a two-row cache, so a monotone backtracking pass fetches each row
// at most once.
class CostMatrixStore {
 public:
  virtual ~CostMatrixStore() = default;

  std::uint64_t rows() const { return rows_; }
  std::uint64_t cols() const { return cols_; }
  Backing backing() const { return backing_; }
  CellWidth cell_width() const { return cell_width_; }
  bool banded() const { return banded_; }
  const IoCounters& io() const { return io_; }

  // Dense stores require lo == 0 and values.size() == cols().
  virtual void write_row(std::uint64_t i, std::uint64_t lo,
                         std::span<const Cost> values) = 0;

  // Banded stores return kInfiniteCost for cells outside the row's interval.
  virtual Cost read_cell(std::uint64_t i, std::uint64_t j) = 0;

  // Cells currently held in this store's buffers or caches.
  virtual std::uint64_t resident_cells() const = 0;

  virtual std::uint64_t spill_bytes() const { return 0; }
  virtual std::filesystem::path spill_path() const { return {}; }

 protected:
  CostMatrixStore(std::uint64_t rows, std::uint64_t cols, Backing backing,
                  CellWidth cell_width, bool banded)
      : rows_(rows),
        cols_(cols),
        backing_(backing),
        cell_width_(cell_width),
        banded_(banded) {}

  void check_write(std::uint64_t i, std::uint64_t lo,
                   std::span<const Cost> values) const;
  void check_read(std::uint64_t i, std::uint64_t j) const;
  Cost max_cell_value() const {
    return cell_width_ == CellWidth::W4 ? 0xFFFFFFFFull : kInfiniteCost;
  }

  std::uint64_t rows_;
  std::uint64_t cols_;
  Backing backing_;
  CellWidth cell_width_;
  bool banded_;
  std::uint64_t next_row_ = 0;
  IoCounters io_;
};

// Resolved-parameter constructors, mainly for tests; `create_store` below
// applies budgets and width prechecks first.
std::unique_ptr<CostMatrixStore> make_memory_store(std::uint64_t rows,
                                                   std::uint64_t cols,
                                                   CellWidth width,
                                                   bool banded);
std::unique_ptr<CostMatrixStore> make_disk_store(
    std::uint64_t rows, std::uint64_t cols, CellWidth width, bool banded,
    const std::filesystem::path& file, bool keep_file);

// Smallest width whose range provably fits the recurrence values, per the
// precheck (max(n, m) + 1) * max_step_cost < 2^32 for 4-byte cells. A forced
// 4-byte width failing the precheck raises OverflowError.
CellWidth resolve_cell_width(std::uint64_t n, std::uint64_t m,
                             std::uint64_t max_step_cost,
                             CellWidthChoice choice);

std::filesystem::path resolve_workdir(const StoreConfig& config);

// Creates a store of logical shape (n+1) x (m+1) for a dense forward pass.
// Auto backing keeps the matrix in memory when it fits the memory budget,
// else spills to a file in the workdir. `banded_cells` (when a band is used)
// is the exact number of in-band cells, for sizing and quota checks.
std::unique_ptr<CostMatrixStore> create_store(std::uint64_t n, std::uint64_t m,
                                              const StoreConfig& config,
                                              std::uint64_t max_step_cost,
                                              std::uint64_t banded_cells = 0,
                                              bool banded = false);

}  // namespace tracealign
