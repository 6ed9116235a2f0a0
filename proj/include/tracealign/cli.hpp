#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tracealign/align.hpp"
#include "tracealign/v8_parser.hpp"

namespace tracealign {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;   // internal errors, failed batch pairs
inline constexpr int kParse = 2;
inline constexpr int kResource = 3;  // I/O, quota, overflow, capacity
inline constexpr int kConfig = 4;
}  // namespace exit_code

enum class OutputFormat { Text, Json };

struct RunConfig {
  std::string subcommand;           // parse | align | batch | bench
  std::vector<std::string> inputs;  // files or the batch manifest

  AlignConfig align;
  TraceFormat trace_format = TraceFormat::Auto;
  OutputFormat output = OutputFormat::Text;

  // Presence-sensitive flags, validated against the selected mode.
  std::optional<std::uint64_t> band_width;
  std::optional<std::uint64_t> radius;
  std::optional<std::uint64_t> min_size;

  bool stats = false;                        // parse: full histogram report
  std::optional<std::string> serialize_to;   // parse: debug dump target
  std::optional<std::string> emit_path;      // align: warp path CSV
  std::optional<std::string> emit_aligned;   // align: gapped pair dump

  unsigned jobs = 1;                 // batch worker pool size
  std::uint64_t seed = 42;           // bench input generation
  std::vector<std::uint64_t> sizes;  // bench ladder
};

// Rejects invalid flag combinations before any I/O happens.
void validate(const RunConfig& config);

struct BatchRow {
  std::uint64_t id = 0;
  std::string a;
  std::string b;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t difficulty = 0;
  Cost cost = 0;
  double wall_time_s = 0.0;
  std::uint64_t peak_resident_cells = 0;
  bool ok = false;
  std::string error;
};

struct BenchEntry {
  std::uint64_t size = 0;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t difficulty = 0;
  Cost cost = 0;
  double wall_time_s = 0.0;
  std::uint64_t cells_computed = 0;
  std::uint64_t peak_resident_cells = 0;
  std::uint64_t spill_bytes = 0;
};

// Output order follows the manifest regardless of worker scheduling.
std::vector<BatchRow> run_batch(const RunConfig& config);
std::vector<BenchEntry> run_bench(const RunConfig& config);

int cmd_parse(const RunConfig& config, std::ostream& out);
int cmd_align(const RunConfig& config, std::ostream& out);
int cmd_batch(const RunConfig& config, std::ostream& out);
int cmd_bench(const RunConfig& config, std::ostream& out);

// Validates, dispatches, and maps exceptions onto exit codes.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace tracealign
