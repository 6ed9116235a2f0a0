#include "tracealign/cli.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "tracealign/errors.hpp"
#include "tracealign/synth.hpp"

namespace tracealign {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

const char* mode_name(AlignMode mode) {
  switch (mode) {
    case AlignMode::Exact:
      return "exact";
    case AlignMode::Banded:
      return "banded";
    case AlignMode::FastDtw:
      return "fastdtw";
  }
  return "?";
}

const char* distance_name(DistanceMode mode) {
  switch (mode) {
    case DistanceMode::Sen:
      return "sen";
    case DistanceMode::Inst:
      return "inst";
    case DistanceMode::Custom:
      return "custom";
  }
  return "?";
}

json stats_json(const AlignStats& stats) {
  return json{
      {"cells_computed", stats.cells_computed},
      {"rows_spilled", stats.rows_spilled},
      {"spill_bytes", stats.spill_bytes},
      {"backtrack_rows_read", stats.backtrack_rows_read},
      {"backtrack_cells_read", stats.backtrack_cells_read},
      {"peak_resident_cells", stats.peak_resident_cells},
      {"wall_time_s", stats.wall_time_s},
      {"backing", stats.backing == Backing::Disk ? "disk" : "memory"},
      {"cell_width", static_cast<std::uint32_t>(stats.cell_width)},
  };
}

json result_json(const RunConfig& config, const AlignmentResult& result) {
  json report{
      {"schema", kSchemaVersion},
      {"cost", result.cost},
      {"n", result.n},
      {"m", result.m},
      {"difficulty", result.difficulty},
      {"mode", mode_name(config.align.mode)},
      {"distance",
       {{"mode", distance_name(config.align.distance.mode)},
        {"gap", config.align.distance.gap_cost},
        {"mismatch", config.align.distance.mismatch_cost},
        {"match", config.align.distance.match_cost}}},
      {"stats", stats_json(result.stats)},
  };
  if (result.path) {
    report["path_len"] = result.path->steps.size();
  } else {
    report["path_len"] = nullptr;
  }
  return report;
}

void print_result_text(const RunConfig& config, const AlignmentResult& result,
                       std::ostream& out) {
  out << "cost: " << result.cost << '\n'
      << "n: " << result.n << "  m: " << result.m
      << "  difficulty: " << result.difficulty << '\n'
      << "mode: " << mode_name(config.align.mode)
      << "  distance: " << distance_name(config.align.distance.mode)
      << "  gap: " << config.align.distance.gap_cost
      << "  mismatch: " << config.align.distance.mismatch_cost
      << "  match: " << config.align.distance.match_cost << '\n';
  if (result.path) {
    out << "path length: " << result.path->steps.size() << '\n';
  }
  const AlignStats& s = result.stats;
  out << "cells computed: " << s.cells_computed << '\n'
      << "peak resident cells: " << s.peak_resident_cells << '\n'
      << "backing: " << (s.backing == Backing::Disk ? "disk" : "memory")
      << "  cell width: " << static_cast<std::uint32_t>(s.cell_width) << '\n';
  if (s.backing == Backing::Disk) {
    out << "rows spilled: " << s.rows_spilled
        << "  spill bytes: " << s.spill_bytes
        << "  backtrack row reads: " << s.backtrack_rows_read << '\n';
  }
  out << "wall time: " << s.wall_time_s << " s\n";
}

Trace load_trace(const RunConfig& config, const std::string& path) {
  return parse_trace_file(path, config.trace_format);
}

void write_file_or_throw(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << body;
  if (!out) throw IoError("write failed: " + path);
}

int map_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return exit_code::kParse;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return exit_code::kConfig;
  } catch (const QuotaError& e) {
    err << "resource error: " << e.what() << '\n';
    return exit_code::kResource;
  } catch (const CapacityError& e) {
    err << "resource error: " << e.what() << '\n';
    return exit_code::kResource;
  } catch (const OverflowError& e) {
    err << "resource error: " << e.what() << '\n';
    return exit_code::kResource;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return exit_code::kResource;
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << '\n';
    return exit_code::kConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kFailure;
  }
}

}  // namespace

void validate(const RunConfig& config) {
  if (config.band_width && config.align.mode != AlignMode::Banded) {
    throw ConfigError("--band-width requires --mode banded");
  }
  if (config.radius && config.align.mode != AlignMode::FastDtw) {
    throw ConfigError("--radius requires --mode fastdtw");
  }
  if (config.min_size && config.align.mode != AlignMode::FastDtw) {
    throw ConfigError("--min-size requires --mode fastdtw");
  }
  if (config.align.cost_only &&
      (config.emit_path || config.emit_aligned)) {
    throw ConfigError("--cost-only cannot emit a path or an aligned pair");
  }
  if (config.jobs == 0) {
    throw ConfigError("--jobs must be at least 1");
  }
  if (config.subcommand == "bench") {
    if (config.sizes.empty()) {
      throw ConfigError("bench requires --sizes");
    }
    for (const auto size : config.sizes) {
      if (size == 0) throw ConfigError("bench sizes must be at least 1");
    }
  }
  config.align.distance.validate();
}

int cmd_parse(const RunConfig& config, std::ostream& out) {
  const Trace trace = load_trace(config, config.inputs.at(0));
  const TraceStats stats = trace_stats(trace);

  if (config.serialize_to) {
    std::ostringstream body;
    serialize_debug(trace, body);
    write_file_or_throw(*config.serialize_to, body.str());
  }

  if (config.output == OutputFormat::Json) {
    json report{
        {"schema", kSchemaVersion},
        {"source", trace.source},
        {"event_count", stats.event_count},
        {"function_count", stats.function_count},
        {"operator_histogram", json::object()},
    };
    for (const auto& [op, count] : stats.operator_histogram) {
      report["operator_histogram"][op] = count;
    }
    out << report.dump(2) << '\n';
  } else {
    out << "source: " << trace.source << '\n'
        << "events: " << stats.event_count << '\n'
        << "functions: " << stats.function_count << '\n';
    if (config.stats) {
      for (const auto& [op, count] : stats.operator_histogram) {
        out << "  " << op << ": " << count << '\n';
      }
    }
  }
  return exit_code::kOk;
}

int cmd_align(const RunConfig& config, std::ostream& out) {
  const Trace x = load_trace(config, config.inputs.at(0));
  const Trace y = load_trace(config, config.inputs.at(1));

  AlignConfig align_config = config.align;
  align_config.want_aligned = config.emit_aligned.has_value();
  const AlignOutcome outcome = align(x, y, align_config);

  if (config.emit_path && outcome.result.path) {
    std::ostringstream body;
    outcome.result.path->write_csv(body);
    write_file_or_throw(*config.emit_path, body.str());
  }
  if (config.emit_aligned && outcome.aligned) {
    std::ostringstream body;
    outcome.aligned->render(x, y, body);
    write_file_or_throw(*config.emit_aligned, body.str());
  }

  if (config.output == OutputFormat::Json) {
    out << result_json(config, outcome.result).dump(2) << '\n';
  } else {
    print_result_text(config, outcome.result, out);
  }
  return exit_code::kOk;
}

std::vector<BatchRow> run_batch(const RunConfig& config) {
  std::ifstream manifest(config.inputs.at(0));
  if (!manifest) {
    throw IoError("cannot open manifest: " + config.inputs.at(0));
  }

  std::vector<BatchRow> rows;
  std::string line;
  while (std::getline(manifest, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    BatchRow row;
    row.id = rows.size();
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      row.error = "manifest line has no tab separator";
    } else {
      row.a = line.substr(0, tab);
      row.b = line.substr(tab + 1);
    }
    rows.push_back(std::move(row));
  }

  const unsigned workers =
      std::min<unsigned>(config.jobs, std::max<std::size_t>(rows.size(), 1));
  std::atomic<std::size_t> next{0};
  const auto work = [&]() {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= rows.size()) return;
      BatchRow& row = rows[idx];
      if (!row.error.empty()) continue;
      try {
        const Trace x = load_trace(config, row.a);
        const Trace y = load_trace(config, row.b);
        AlignConfig align_config = config.align;
        const auto start = std::chrono::steady_clock::now();
        const AlignOutcome outcome = align(x, y, align_config);
        const auto end = std::chrono::steady_clock::now();
        row.n = outcome.result.n;
        row.m = outcome.result.m;
        row.difficulty = outcome.result.difficulty;
        row.cost = outcome.result.cost;
        row.wall_time_s = std::chrono::duration<double>(end - start).count();
        row.peak_resident_cells = outcome.result.stats.peak_resident_cells;
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return rows;
}

int cmd_batch(const RunConfig& config, std::ostream& out) {
  const std::vector<BatchRow> rows = run_batch(config);

  if (config.output == OutputFormat::Json) {
    json report{{"schema", kSchemaVersion}, {"pairs", json::array()}};
    for (const auto& row : rows) {
      json entry{
          {"id", row.id},         {"a", row.a},
          {"b", row.b},           {"ok", row.ok},
          {"n", row.n},           {"m", row.m},
          {"difficulty", row.difficulty},
          {"cost", row.cost},     {"wall_time_s", row.wall_time_s},
          {"peak_resident_cells", row.peak_resident_cells},
      };
      if (!row.ok) entry["error"] = row.error;
      report["pairs"].push_back(std::move(entry));
    }
    out << report.dump(2) << '\n';
  } else {
    out << "id\tn\tm\tdifficulty\tcost\twall_s\tpeak_cells\tstatus\n";
    for (const auto& row : rows) {
      out << row.id << '\t';
      if (row.ok) {
        out << row.n << '\t' << row.m << '\t' << row.difficulty << '\t'
            << row.cost << '\t' << std::setprecision(6) << row.wall_time_s
            << '\t' << row.peak_resident_cells << "\tok\n";
      } else {
        out << "-\t-\t-\t-\t-\t-\tfailed: " << row.error << '\n';
      }
    }
  }

  for (const auto& row : rows) {
    if (!row.ok) return exit_code::kFailure;
  }
  return exit_code::kOk;
}

std::vector<BenchEntry> run_bench(const RunConfig& config) {
  std::vector<BenchEntry> entries;
  entries.reserve(config.sizes.size());
  for (const std::uint64_t size : config.sizes) {
    const Trace x =
        synth_trace({.length = size, .alphabet_size = 16, .seed = config.seed});
    const Trace y = synth_trace(
        {.length = size, .alphabet_size = 16, .seed = config.seed + 1});
    const AlignOutcome outcome = align(x, y, config.align);

    BenchEntry entry;
    entry.size = size;
    entry.n = outcome.result.n;
    entry.m = outcome.result.m;
    entry.difficulty = outcome.result.difficulty;
    entry.cost = outcome.result.cost;
    entry.wall_time_s = outcome.result.stats.wall_time_s;
    entry.cells_computed = outcome.result.stats.cells_computed;
    entry.peak_resident_cells = outcome.result.stats.peak_resident_cells;
    entry.spill_bytes = outcome.result.stats.spill_bytes;
    entries.push_back(entry);
  }
  return entries;
}

int cmd_bench(const RunConfig& config, std::ostream& out) {
  const std::vector<BenchEntry> entries = run_bench(config);

  if (config.output == OutputFormat::Json) {
    json report{{"schema", kSchemaVersion},
                {"mode", mode_name(config.align.mode)},
                {"seed", config.seed},
                {"entries", json::array()}};
    for (const auto& e : entries) {
      report["entries"].push_back(json{
          {"size", e.size},
          {"n", e.n},
          {"m", e.m},
          {"difficulty", e.difficulty},
          {"cost", e.cost},
          {"wall_time_s", e.wall_time_s},
          {"cells_computed", e.cells_computed},
          {"peak_resident_cells", e.peak_resident_cells},
          {"spill_bytes", e.spill_bytes},
      });
    }
    out << report.dump(2) << '\n';
  } else {
    out << "size\tdifficulty\tcost\twall_s\tcells\tpeak_cells\tspill_bytes\n";
    for (const auto& e : entries) {
      out << e.size << '\t' << e.difficulty << '\t' << e.cost << '\t'
          << std::setprecision(6) << e.wall_time_s << '\t' << e.cells_computed
          << '\t' << e.peak_resident_cells << '\t' << e.spill_bytes << '\n';
    }
  }
  return exit_code::kOk;
}

int run_command(const RunConfig& config, std::ostream& out,
                std::ostream& err) {
  try {
    validate(config);
    if (config.subcommand == "parse") return cmd_parse(config, out);
    if (config.subcommand == "align") return cmd_align(config, out);
    if (config.subcommand == "batch") return cmd_batch(config, out);
    if (config.subcommand == "bench") return cmd_bench(config, out);
    throw ConfigError("unknown subcommand: " + config.subcommand);
  } catch (...) {
    return map_exception(err);
  }
}

}  // namespace tracealign
