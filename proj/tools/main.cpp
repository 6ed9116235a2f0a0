#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tracealign/cli.hpp"

namespace {

using tracealign::RunConfig;

std::uint64_t parse_size(const std::string& token) {
  try {
    std::size_t consumed = 0;
    const std::uint64_t value = std::stoull(token, &consumed);
    if (consumed == token.size()) return value;
    if (consumed + 1 == token.size()) {
      switch (token[consumed]) {
        case 'k':
        case 'K':
          return value * 1000;
        case 'm':
        case 'M':
          return value * 1000000;
        default:
          break;
      }
    }
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError("--sizes", "cannot parse size '" + token + "'");
}

void add_input_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option_function<std::string>(
         "--format",
         [&config](const std::string& value) {
           if (value == "auto") {
             config.trace_format = tracealign::TraceFormat::Auto;
           } else if (value == "v8") {
             config.trace_format = tracealign::TraceFormat::V8;
           } else {
             config.trace_format = tracealign::TraceFormat::Debug;
           }
         },
         "Input trace format")
      ->check(CLI::IsMember({"auto", "v8", "debug"}))
      ->default_str("auto");
  cmd->add_option_function<std::string>(
         "--output",
         [&config](const std::string& value) {
           config.output = value == "json" ? tracealign::OutputFormat::Json
                                           : tracealign::OutputFormat::Text;
         },
         "Report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->default_str("text");
}

void add_align_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option_function<std::string>(
         "--distance",
         [&config](const std::string& value) {
           config.align.distance.mode = value == "inst"
                                            ? tracealign::DistanceMode::Inst
                                            : tracealign::DistanceMode::Sen;
         },
         "Event distance: identical instruction (sen) or operator only "
         "(inst)")
      ->check(CLI::IsMember({"sen", "inst"}))
      ->default_str("sen");
  cmd->add_option("--gap", config.align.distance.gap_cost, "Gap cost");
  cmd->add_option("--mismatch", config.align.distance.mismatch_cost,
                  "Mismatch cost");
  cmd->add_option("--match", config.align.distance.match_cost, "Match cost");
  cmd->add_flag("--allow-gap-geq-mismatch",
                config.align.distance.allow_gap_geq_mismatch,
                "Permit gap cost >= mismatch cost");

  cmd->add_option_function<std::string>(
         "--mode",
         [&config](const std::string& value) {
           if (value == "banded") {
             config.align.mode = tracealign::AlignMode::Banded;
           } else if (value == "fastdtw") {
             config.align.mode = tracealign::AlignMode::FastDtw;
           } else {
             config.align.mode = tracealign::AlignMode::Exact;
           }
         },
         "Alignment mode")
      ->check(CLI::IsMember({"exact", "banded", "fastdtw"}))
      ->default_str("exact");
  cmd->add_option_function<std::uint64_t>(
      "--band-width",
      [&config](std::uint64_t value) {
        config.band_width = value;
        config.align.band_width = value;
      },
      "Band half-width (banded mode)");
  cmd->add_option_function<std::uint64_t>(
      "--radius",
      [&config](std::uint64_t value) {
        config.radius = value;
        config.align.fastdtw.radius = value;
      },
      "Search radius (fastdtw mode)");
  cmd->add_option_function<std::uint64_t>(
      "--min-size",
      [&config](std::uint64_t value) {
        config.min_size = value;
        config.align.fastdtw.min_size = value;
      },
      "Length below which fastdtw falls back to exact DTW");

  cmd->add_option_function<std::string>(
         "--backing",
         [&config](const std::string& value) {
           if (value == "memory") {
             config.align.store.backing = tracealign::BackingChoice::Memory;
           } else if (value == "disk") {
             config.align.store.backing = tracealign::BackingChoice::Disk;
           } else {
             config.align.store.backing = tracealign::BackingChoice::Auto;
           }
         },
         "Cost matrix backing")
      ->check(CLI::IsMember({"auto", "memory", "disk"}))
      ->default_str("auto");
  cmd->add_option_function<std::string>(
         "--cell-width",
         [&config](const std::string& value) {
           if (value == "4") {
             config.align.store.cell_width = tracealign::CellWidthChoice::W4;
           } else if (value == "8") {
             config.align.store.cell_width = tracealign::CellWidthChoice::W8;
           } else {
             config.align.store.cell_width = tracealign::CellWidthChoice::Auto;
           }
         },
         "Bytes per matrix cell")
      ->check(CLI::IsMember({"auto", "4", "8"}))
      ->default_str("auto");
  cmd->add_option("--workdir", config.align.store.workdir,
                  "Spill directory (default $TRACEALIGN_WORKDIR or tmp)");
  cmd->add_option("--mem-budget", config.align.store.budgets.memory_bytes,
                  "In-memory matrix budget, bytes");
  cmd->add_option("--disk-budget", config.align.store.budgets.disk_bytes,
                  "Spill file budget, bytes (0 = unlimited)");
  cmd->add_flag("--keep-matrix", config.align.store.keep_matrix,
                "Keep the spill file after a successful run");
  cmd->add_flag("--cost-only", config.align.cost_only,
                "Skip backtracking; never spills");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Alignment and comparison of V8 bytecode traces"};
  app.require_subcommand(1);

  RunConfig config;

  CLI::App* parse =
      app.add_subcommand("parse", "Parse a trace and report statistics");
  parse->add_option("file", config.inputs, "Trace file")
      ->expected(1)
      ->required();
  add_input_flags(parse, config);
  parse->add_flag("--stats", config.stats, "Print the operator histogram");
  parse->add_option_function<std::string>(
      "--serialize",
      [&config](const std::string& value) { config.serialize_to = value; },
      "Write the event-per-line debug serialization to a file");

  CLI::App* align_cmd =
      app.add_subcommand("align", "Align two traces and report the result");
  align_cmd->add_option("files", config.inputs, "Two trace files")
      ->expected(2)
      ->required();
  add_input_flags(align_cmd, config);
  add_align_flags(align_cmd, config);
  align_cmd->add_option_function<std::string>(
      "--emit-path",
      [&config](const std::string& value) { config.emit_path = value; },
      "Write the warp path as CSV of (i,j) pairs");
  align_cmd->add_option_function<std::string>(
      "--emit-aligned",
      [&config](const std::string& value) { config.emit_aligned = value; },
      "Write the side-by-side aligned traces (gaps as '-')");

  CLI::App* batch = app.add_subcommand(
      "batch", "Align pairs listed in a manifest (path<TAB>path per line)");
  batch->add_option("manifest", config.inputs, "Manifest file")
      ->expected(1)
      ->required();
  add_input_flags(batch, config);
  add_align_flags(batch, config);
  batch->add_option("--jobs", config.jobs, "Worker pool size");

  CLI::App* bench = app.add_subcommand(
      "bench", "Time alignments of synthetic traces across a size ladder");
  add_input_flags(bench, config);
  add_align_flags(bench, config);
  bench
      ->add_option_function<std::string>(
          "--sizes",
          [&config](const std::string& value) {
            config.sizes.clear();
            std::size_t start = 0;
            while (start <= value.size()) {
              const auto comma = value.find(',', start);
              const std::string token =
                  comma == std::string::npos ? value.substr(start)
                                             : value.substr(start, comma - start);
              if (!token.empty()) config.sizes.push_back(parse_size(token));
              if (comma == std::string::npos) break;
              start = comma + 1;
            }
          },
          "Comma-separated trace lengths, e.g. 1k,2k,4k")
      ->required();
  bench->add_option("--seed", config.seed, "Synthetic trace seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tracealign::exit_code::kConfig;
  }

  config.subcommand = app.get_subcommands().front()->get_name();
  return tracealign::run_command(config, std::cout, std::cerr);
}
