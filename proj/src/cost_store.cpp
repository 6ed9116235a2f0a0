#include "tracealign/cost_store.hpp"

#include <array>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "tracealign/errors.hpp"

namespace tracealign {

namespace {

void put_le(unsigned char* out, std::uint64_t value, std::size_t bytes) {
  for (std::size_t k = 0; k < bytes; ++k) {
    out[k] = static_cast<unsigned char>(value >> (8 * k));
  }
}

std::uint64_t get_le(const unsigned char* in, std::size_t bytes) {
  std::uint64_t value = 0;
  for (std::size_t k = 0; k < bytes; ++k) {
    value |= static_cast<std::uint64_t>(in[k]) << (8 * k);
  }
  return value;
}

std::filesystem::path unique_spill_name(const std::filesystem::path& dir) {
  static std::atomic<std::uint64_t> counter{0};
  const std::uint64_t id = counter.fetch_add(1);
  return dir / ("costmat-" + std::to_string(::getpid()) + "-" +
                std::to_string(id) + ".strc");
}

}  // namespace

void CostMatrixStore::check_write(std::uint64_t i, std::uint64_t lo,
                                  std::span<const Cost> values) const {
  if (i != next_row_) {
    throw ContractError("rows must be written in increasing order: expected " +
                        std::to_string(next_row_) + ", got " +
                        std::to_string(i));
  }
  if (i >= rows_) {
    throw ContractError("row index " + std::to_string(i) +
                        " outside store of " + std::to_string(rows_) +
                        " rows");
  }
  if (values.empty() || lo + values.size() > cols_) {
    throw ContractError("row interval outside the matrix");
  }
  if (!banded_ && (lo != 0 || values.size() != cols_)) {
    throw ContractError("dense stores require full rows");
  }
  const Cost max_value = max_cell_value();
  for (const Cost v : values) {
    if (v > max_value) {
      throw OverflowError(
          "cost " + std::to_string(v) + " does not fit a " +
          std::to_string(static_cast<std::uint32_t>(cell_width_)) +
          "-byte cell; retry with cell width 8");
    }
  }
}

void CostMatrixStore::check_read(std::uint64_t i, std::uint64_t j) const {
  if (i >= rows_ || j >= cols_) {
    throw ContractError("cell (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") outside the matrix");
  }
  if (i >= next_row_) {
    throw ContractError("row " + std::to_string(i) + " has not been written");
  }
}

namespace {

// ---------------------------------------------------------------------------
// Memory backing

class MemoryCostStore final : public CostMatrixStore {
 public:
  MemoryCostStore(std::uint64_t rows, std::uint64_t cols, CellWidth width,
                  bool banded)
      : CostMatrixStore(rows, cols, Backing::Memory, width, banded) {
    row_lo_.reserve(banded ? rows : 0);
    if (!banded) {
      if (width == CellWidth::W4) {
        cells32_.reserve(rows * cols);
      } else {
        cells64_.reserve(rows * cols);
      }
    }
    row_offset_.reserve(rows);
  }

  void write_row(std::uint64_t i, std::uint64_t lo,
                 std::span<const Cost> values) override {
    check_write(i, lo, values);
    row_offset_.push_back(cell_count_);
    if (banded_) row_lo_.push_back(lo);
    if (cell_width_ == CellWidth::W4) {
      for (const Cost v : values) {
        cells32_.push_back(static_cast<std::uint32_t>(v));
      }
    } else {
      cells64_.insert(cells64_.end(), values.begin(), values.end());
    }
    cell_count_ += values.size();
    row_width_.push_back(values.size());
    ++next_row_;
    ++io_.rows_written;
    io_.cells_written += values.size();
  }

  Cost read_cell(std::uint64_t i, std::uint64_t j) override {
    check_read(i, j);
    ++io_.cells_read;
    const std::uint64_t lo = banded_ ? row_lo_[i] : 0;
    if (j < lo || j >= lo + row_width_[i]) return kInfiniteCost;
    const std::uint64_t at = row_offset_[i] + (j - lo);
    return cell_width_ == CellWidth::W4 ? Cost{cells32_[at]} : cells64_[at];
  }

  std::uint64_t resident_cells() const override { return cell_count_; }

 private:
  std::vector<std::uint32_t> cells32_;
  std::vector<std::uint64_t> cells64_;
  std::vector<std::uint64_t> row_offset_;
  std::vector<std::uint64_t> row_width_;
  std::vector<std::uint64_t> row_lo_;
  std::uint64_t cell_count_ = 0;
};

// ---------------------------------------------------------------------------
// Disk backing: buffered sequential writes, two-row read cache.

class DiskCostStore final : public CostMatrixStore {
 public:
  DiskCostStore(std::uint64_t rows, std::uint64_t cols, CellWidth width,
                bool banded, std::filesystem::path file, bool keep_file)
      : CostMatrixStore(rows, cols, Backing::Disk, width, banded),
        path_(std::move(file)),
        keep_file_(keep_file) {
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) {
      throw IoError("cannot create spill file: " + path_.string());
    }
    std::array<unsigned char, kSpillHeaderBytes> header{};
    std::memcpy(header.data(), kSpillMagic, 4);
    put_le(header.data() + 4,
           banded ? kSpillVersionBanded : kSpillVersionDense, 4);
    put_le(header.data() + 8, rows, 8);
    put_le(header.data() + 16, cols, 4);
    put_le(header.data() + 20, static_cast<std::uint32_t>(width), 4);
    out_.write(reinterpret_cast<const char*>(header.data()), header.size());
    if (!out_) throw IoError("cannot write spill header: " + path_.string());
    bytes_written_ = kSpillHeaderBytes;
    if (banded) row_index_.reserve(rows);
  }

  ~DiskCostStore() override {
    out_.close();
    in_.close();
    if (!keep_file_) {
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }

  void write_row(std::uint64_t i, std::uint64_t lo,
                 std::span<const Cost> values) override {
    check_write(i, lo, values);
    if (!out_.is_open()) {
      throw ContractError("write_row after reads began");
    }
    if (banded_) {
      row_index_.push_back(RowRecord{bytes_written_, lo, values.size()});
      std::array<unsigned char, 8> prefix;
      put_le(prefix.data(), lo, 4);
      put_le(prefix.data() + 4, lo + values.size() - 1, 4);
      out_.write(reinterpret_cast<const char*>(prefix.data()), prefix.size());
      bytes_written_ += prefix.size();
    }

    const std::size_t width = static_cast<std::size_t>(cell_width_);
    std::array<unsigned char, 16384> chunk;
    std::size_t used = 0;
    for (const Cost v : values) {
      if (used + width > chunk.size()) {
        out_.write(reinterpret_cast<const char*>(chunk.data()), used);
        used = 0;
      }
      put_le(chunk.data() + used, v, width);
      used += width;
    }
    if (used > 0) {
      out_.write(reinterpret_cast<const char*>(chunk.data()), used);
    }
    if (!out_) throw IoError("spill write failed: " + path_.string());
    bytes_written_ += values.size() * width;
    ++next_row_;
    ++io_.rows_written;
    io_.cells_written += values.size();
  }

  Cost read_cell(std::uint64_t i, std::uint64_t j) override {
    check_read(i, j);
    ++io_.cells_read;
    CachedRow* row = find_cached(i);
    if (row == nullptr) row = fetch_row(i);
    if (j < row->lo || j >= row->lo + row->cells.size()) {
      return kInfiniteCost;  // outside the banded interval
    }
    return row->cells[j - row->lo];
  }

  std::uint64_t resident_cells() const override {
    return cache_[0].cells.size() + cache_[1].cells.size();
  }

  std::uint64_t spill_bytes() const override { return bytes_written_; }
  std::filesystem::path spill_path() const override { return path_; }

 private:
  struct RowRecord {
    std::uint64_t offset;
    std::uint64_t lo;
    std::uint64_t width;
  };

  struct CachedRow {
    std::uint64_t index = kInfiniteCost;
    std::uint64_t lo = 0;
    std::uint64_t last_used = 0;
    std::vector<Cost> cells;
  };

  CachedRow* find_cached(std::uint64_t i) {
    for (auto& slot : cache_) {
      if (slot.index == i) {
        slot.last_used = ++clock_;
        return &slot;
      }
    }
    return nullptr;
  }

  CachedRow* fetch_row(std::uint64_t i) {
    if (out_.is_open()) {
      out_.flush();
      if (!out_) throw IoError("spill flush failed: " + path_.string());
      out_.close();
    }
    if (!in_.is_open()) {
      in_.open(path_, std::ios::binary);
      if (!in_) throw IoError("cannot reopen spill file: " + path_.string());
    }

    std::uint64_t offset;
    std::uint64_t lo = 0;
    std::uint64_t width_cells;
    if (banded_) {
      const RowRecord& rec = row_index_[i];
      offset = rec.offset + 8;  // skip the interval prefix
      lo = rec.lo;
      width_cells = rec.width;
    } else {
      const std::size_t width = static_cast<std::size_t>(cell_width_);
      offset = kSpillHeaderBytes + i * cols_ * width;
      width_cells = cols_;
    }

    CachedRow& slot = cache_[cache_[0].last_used <= cache_[1].last_used ? 0 : 1];
    const std::size_t width = static_cast<std::size_t>(cell_width_);
    buffer_.resize(width_cells * width);
    in_.seekg(static_cast<std::streamoff>(offset));
    in_.read(reinterpret_cast<char*>(buffer_.data()),
             static_cast<std::streamsize>(buffer_.size()));
    if (!in_) throw IoError("spill read failed: " + path_.string());

    slot.index = i;
    slot.lo = lo;
    slot.last_used = ++clock_;
    slot.cells.resize(width_cells);
    for (std::uint64_t k = 0; k < width_cells; ++k) {
      slot.cells[k] = get_le(buffer_.data() + k * width, width);
    }
    ++io_.rows_read;
    return &slot;
  }

  std::filesystem::path path_;
  bool keep_file_;
  std::ofstream out_;
  std::ifstream in_;
  std::uint64_t bytes_written_ = 0;
  std::vector<RowRecord> row_index_;
  CachedRow cache_[2];
  std::uint64_t clock_ = 0;
  std::vector<unsigned char> buffer_;
};

}  // namespace

std::unique_ptr<CostMatrixStore> make_memory_store(std::uint64_t rows,
                                                   std::uint64_t cols,
                                                   CellWidth width,
                                                   bool banded) {
  return std::make_unique<MemoryCostStore>(rows, cols, width, banded);
}

std::unique_ptr<CostMatrixStore> make_disk_store(
    std::uint64_t rows, std::uint64_t cols, CellWidth width, bool banded,
    const std::filesystem::path& file, bool keep_file) {
  return std::make_unique<DiskCostStore>(rows, cols, width, banded, file,
                                         keep_file);
}

CellWidth resolve_cell_width(std::uint64_t n, std::uint64_t m,
                             std::uint64_t max_step_cost,
                             CellWidthChoice choice) {
  const std::uint64_t longest = (n > m ? n : m) + 1;
  const bool needs_wide =
      static_cast<unsigned __int128>(longest) * max_step_cost >= (1ull << 32);
  switch (choice) {
    case CellWidthChoice::W8:
      return CellWidth::W8;
    case CellWidthChoice::W4:
      if (needs_wide) {
        throw OverflowError(
            "matrix values may exceed the 4-byte cell range; use cell "
            "width 8");
      }
      return CellWidth::W4;
    case CellWidthChoice::Auto:
      return needs_wide ? CellWidth::W8 : CellWidth::W4;
  }
  return CellWidth::W4;
}

std::filesystem::path resolve_workdir(const StoreConfig& config) {
  if (!config.workdir.empty()) return config.workdir;
  if (const char* env = std::getenv("TRACEALIGN_WORKDIR");
      env != nullptr && *env != '\0') {
    return env;
  }
  return std::filesystem::temp_directory_path();
}

std::unique_ptr<CostMatrixStore> create_store(std::uint64_t n, std::uint64_t m,
                                              const StoreConfig& config,
                                              std::uint64_t max_step_cost,
                                              std::uint64_t banded_cells,
                                              bool banded) {
  const std::uint64_t rows = n + 1;
  const std::uint64_t cols = m + 1;
  const CellWidth width =
      resolve_cell_width(n, m, max_step_cost, config.cell_width);
  const std::uint64_t width_bytes = static_cast<std::uint64_t>(width);
  const std::uint64_t payload_cells = banded ? banded_cells : rows * cols;
  const std::uint64_t payload_bytes = payload_cells * width_bytes;

  const bool fits_memory = payload_bytes <= config.budgets.memory_bytes;
  Backing backing;
  switch (config.backing) {
    case BackingChoice::Memory:
      if (!fits_memory) {
        throw CapacityError(
            "matrix of " + std::to_string(payload_bytes) +
            " bytes exceeds the memory budget of " +
            std::to_string(config.budgets.memory_bytes) +
            " bytes; use disk backing");
      }
      backing = Backing::Memory;
      break;
    case BackingChoice::Disk:
      backing = Backing::Disk;
      break;
    case BackingChoice::Auto:
      backing = fits_memory ? Backing::Memory : Backing::Disk;
      break;
  }

  if (backing == Backing::Memory) {
    return make_memory_store(rows, cols, width, banded);
  }

  const std::uint64_t file_bytes =
      kSpillHeaderBytes + payload_bytes + (banded ? rows * 8 : 0);
  if (config.budgets.disk_bytes != 0 &&
      file_bytes > config.budgets.disk_bytes) {
    throw QuotaError("spill file of " + std::to_string(file_bytes) +
                     " bytes exceeds the disk budget of " +
                     std::to_string(config.budgets.disk_bytes) + " bytes");
  }

  const std::filesystem::path dir = resolve_workdir(config);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create workdir " + dir.string() + ": " +
                  ec.message());
  }
  return make_disk_store(rows, cols, width, banded, unique_spill_name(dir),
                         config.keep_matrix);
}

}  // namespace tracealign
