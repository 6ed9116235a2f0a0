// Acceptance suite: end-to-end checks of the library's contracts, one test
// case per criterion, each printing a single PASS/FAIL line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "oracle.hpp"
#include "tracealign/align.hpp"
#include "tracealign/synth.hpp"
#include "tracealign/v8_parser.hpp"

using namespace tracealign;
namespace fs = std::filesystem;

namespace {

struct Checker {
  bool ok = true;
  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      MESSAGE("check failed: " << what);
    }
  }
};

void report(const char* name, bool ok) {
  std::cout << "[acceptance] " << name << (ok ? ": PASS" : ": FAIL")
            << std::endl;
  CHECK_MESSAGE(ok, name);
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    const fs::path p =
        fs::temp_directory_path() /
        ("tracealign-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

DistanceSpec symbolic_spec() {
  DistanceSpec spec;
  spec.mode = DistanceMode::Inst;
  spec.mismatch_cost = 2;
  spec.match_cost = 0;
  spec.gap_cost = 1;
  return spec;
}

// Shared 10k x 10k disk-backed run used by the residency and the
// backtracking-I/O criteria.
struct BigRun {
  AlignmentResult result;
  std::uint64_t spill_file_bytes = 0;
};

const BigRun& big_disk_run() {
  static const BigRun run = [] {
    const std::uint64_t n = 10000;
    const Trace x = synth_trace({.length = n, .alphabet_size = 16, .seed = 1});
    const Trace y = synth_trace({.length = n, .alphabet_size = 16, .seed = 2});

    AlignConfig config;
    config.store.backing = BackingChoice::Disk;
    config.store.workdir = scratch_dir();
    config.store.keep_matrix = true;

    BigRun out;
    const AlignOutcome outcome = align(x, y, config);
    out.result = outcome.result;
    for (const auto& entry : fs::directory_iterator(scratch_dir())) {
      if (entry.path().extension() == ".strc") {
        out.spill_file_bytes = fs::file_size(entry.path());
        fs::remove(entry.path());
      }
    }
    return out;
  }();
  return run;
}

// Corpus for the clustering criteria: every trace shares a "builtin" prefix;
// each page contributes its own script blocks, and replicas of a page are
// block permutations of the same script.
struct Corpus {
  std::vector<std::vector<Trace>> pages;  // pages[p][replica]
  std::vector<std::pair<const Trace*, const Trace*>> same_page;
  std::vector<std::pair<const Trace*, const Trace*>> cross_page;
};

Trace page_script(std::uint64_t page, std::uint64_t length) {
  Trace t;
  t.source = "page" + std::to_string(page);
  std::mt19937_64 rng(9000 + page);
  for (std::uint64_t i = 0; i < length; ++i) {
    TraceEvent e;
    e.op = "s" + std::to_string(rng() % 6);  // operators shared across pages
    e.operands = {"p" + std::to_string(page) + "_" +
                  std::to_string(rng() % 40)};  // operands are page-specific
    t.events.push_back(std::move(e));
  }
  return t;
}

const Corpus& clustering_corpus() {
  static const Corpus corpus = [] {
    Corpus c;
    const Trace builtin =
        synth_trace({.length = 2000, .alphabet_size = 20, .seed = 77});
    const std::vector<std::uint64_t> block_cuts{400, 800};

    c.pages.resize(4);
    for (std::uint64_t p = 0; p < 4; ++p) {
      const Trace script = page_script(p, 1200);
      for (std::uint64_t r = 0; r < 3; ++r) {
        c.pages[p].push_back(
            concat_traces(builtin, shuffle_blocks(script, block_cuts, r)));
      }
    }
    for (std::uint64_t p = 0; p < 4; ++p) {
      c.same_page.push_back({&c.pages[p][0], &c.pages[p][1]});
      c.same_page.push_back({&c.pages[p][0], &c.pages[p][2]});
      c.same_page.push_back({&c.pages[p][1], &c.pages[p][2]});
    }
    c.cross_page = {
        {&c.pages[0][0], &c.pages[1][0]}, {&c.pages[0][1], &c.pages[2][0]},
        {&c.pages[0][2], &c.pages[3][0]}, {&c.pages[1][1], &c.pages[2][1]},
        {&c.pages[1][2], &c.pages[3][1]}, {&c.pages[2][2], &c.pages[3][2]},
        {&c.pages[0][0], &c.pages[2][2]}, {&c.pages[1][0], &c.pages[3][2]},
    };
    return c;
  }();
  return corpus;
}

Cost corpus_cost(const Trace& x, const Trace& y, DistanceMode mode) {
  AlignConfig config;
  config.distance.mode = mode;
  config.cost_only = true;
  return align(x, y, config).result.cost;
}

}  // namespace

TEST_CASE("criterion 1: symbolic golden alignment") {
  Checker c;
  const Trace x = test_helpers::trace_from_symbols("abcababc");
  const Trace y = test_helpers::trace_from_symbols("aabaca");
  const AlignOutcome outcome = align(x, y, {.distance = symbolic_spec()});

  c.expect(outcome.result.cost == 4, "alignment cost must be exactly 4");
  c.expect(outcome.result.path.has_value(), "path present");
  if (outcome.result.path) {
    const WarpPath& path = *outcome.result.path;
    c.expect(path.steps.front() == std::pair<std::uint64_t, std::uint64_t>{0, 0},
             "path starts at (0,0)");
    c.expect(path.steps.back() == std::pair<std::uint64_t, std::uint64_t>{8, 6},
             "path ends at (8,6)");
    const EventDistance dist = make_distance(symbolic_spec());
    c.expect(replay_path_cost(x, y, dist, path) == 4, "path replays to 4");
  }
  report("01 symbolic-golden", c.ok);
}

TEST_CASE("criterion 2: parser golden listing") {
  Checker c;
  std::istringstream in(test_helpers::kSampleListing);
  const Trace t = parse_v8_trace(in, "listing");

  c.expect(t.length() == 4, "exactly 4 events");
  const std::vector<std::string> expected_ops{"StackCheck", "LdaNamedProperty",
                                              "AddSmi", "Return"};
  for (std::size_t i = 0; i < expected_ops.size() && i < t.events.size();
       ++i) {
    c.expect(t.events[i].op == expected_ops[i],
             "operator " + std::to_string(i) + " is " + expected_ops[i]);
  }
  if (t.length() == 4) {
    c.expect(t.events[0].operands.empty(), "first event has no operands");
    c.expect(t.events[1].operands ==
                 std::vector<std::string>{"a0", "[0]", "[1]"},
             "printed operands of the property load");
    c.expect(t.events[2].operands == std::vector<std::string>{"[1]", "[0]"},
             "printed operands of the add");
    c.expect(t.events[3].operands.empty(), "last event has no operands");
  }

  std::ostringstream dump;
  serialize_debug(t, dump);
  std::istringstream reparse(dump.str());
  const Trace restored = parse_debug(reparse);
  c.expect(restored.length() == t.length(), "round-trip preserves the count");
  for (std::size_t i = 0; i < t.events.size() && i < restored.events.size();
       ++i) {
    c.expect(restored.events[i].canonical_key() ==
                 t.events[i].canonical_key(),
             "round-trip preserves event " + std::to_string(i));
  }
  report("02 parser-golden", c.ok);
}

TEST_CASE("criterion 3: oracle equivalence on 500 random pairs") {
  Checker c;
  std::mt19937_64 rng(20240001);
  int exhaustive_checked = 0;

  for (int trial = 0; trial < 500; ++trial) {
    const bool tiny = trial < 100;
    const std::uint64_t max_len = tiny ? 8 : 64;
    DistanceSpec spec;
    spec.mode = trial % 2 == 0 ? DistanceMode::Sen : DistanceMode::Inst;
    spec.mismatch_cost = 2 + rng() % 9;
    spec.gap_cost = rng() % spec.mismatch_cost;  // random gap < mismatch
    spec.match_cost = 0;

    const Trace x = test_helpers::random_trace(rng() % (max_len + 1),
                                               1 + rng() % 8, rng());
    const Trace y = test_helpers::random_trace(rng() % (max_len + 1),
                                               1 + rng() % 8, rng());
    const EventDistance dist = make_distance(spec);

    const Cost engine = align(x, y, {.distance = spec}).result.cost;
    const Cost oracle = test_oracle::memoized_cost(x, y, dist);
    if (engine != oracle) {
      c.expect(false, "engine " + std::to_string(engine) + " != oracle " +
                          std::to_string(oracle) + " at trial " +
                          std::to_string(trial));
      break;
    }
    if (tiny) {
      const Cost exhaustive = test_oracle::exhaustive_min_cost(x, y, dist);
      if (engine != exhaustive) {
        c.expect(false, "engine differs from exhaustive minimum at trial " +
                            std::to_string(trial));
        break;
      }
      ++exhaustive_checked;
    }
  }
  c.expect(exhaustive_checked == 100, "100 pairs checked exhaustively");
  report("03 oracle-equivalence", c.ok);
}

TEST_CASE("criterion 4: memory and disk backings are equivalent") {
  Checker c;
  std::mt19937_64 rng(20240002);
  const fs::path dir = scratch_dir() / "backing";
  fs::create_directories(dir);

  for (int trial = 0; trial < 100; ++trial) {
    DistanceSpec spec;
    spec.mode = trial % 2 == 0 ? DistanceMode::Sen : DistanceMode::Inst;
    const Trace x =
        test_helpers::random_trace(1 + rng() % 64, 1 + rng() % 6, rng());
    const Trace y =
        test_helpers::random_trace(1 + rng() % 64, 1 + rng() % 6, rng());

    AlignConfig in_memory{.distance = spec};
    in_memory.store.backing = BackingChoice::Memory;
    AlignConfig on_disk{.distance = spec};
    on_disk.store.backing = BackingChoice::Disk;
    on_disk.store.workdir = dir;

    const AlignOutcome a = align(x, y, in_memory);
    const AlignOutcome b = align(x, y, on_disk);
    if (a.result.cost != b.result.cost ||
        a.result.path->steps != b.result.path->steps) {
      c.expect(false, "backing divergence at trial " + std::to_string(trial));
      break;
    }
  }

  // Bit-exact spill round-trip: the file must contain precisely the header
  // plus the matrix cells in row order, little-endian.
  {
    const Trace x = test_helpers::random_trace(24, 4, 1);
    const Trace y = test_helpers::random_trace(20, 4, 2);
    const EventDistance dist = make_distance(DistanceSpec{});

    auto memory = make_memory_store(25, 21, CellWidth::W4, false);
    dtw_forward(x, y, dist, *memory);

    const fs::path file = dir / "roundtrip.strc";
    {
      auto disk = make_disk_store(25, 21, CellWidth::W4, false, file, true);
      dtw_forward(x, y, dist, *disk);
      for (std::uint64_t i = 0; i < 25; ++i) {
        for (std::uint64_t j = 0; j < 21; ++j) {
          if (disk->read_cell(i, j) != memory->read_cell(i, j)) {
            c.expect(false, "disk cell differs from memory cell");
          }
        }
      }
    }

    std::ifstream in(file, std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    std::vector<unsigned char> expected;
    expected.reserve(24 + 25 * 21 * 4);
    const auto push_le = [&expected](std::uint64_t v, int n) {
      for (int k = 0; k < n; ++k) {
        expected.push_back(static_cast<unsigned char>(v >> (8 * k)));
      }
    };
    expected.insert(expected.end(), {'S', 'T', 'R', 'C'});
    push_le(1, 4);   // dense layout version
    push_le(25, 8);  // rows
    push_le(21, 4);  // cols
    push_le(4, 4);   // cell width
    for (std::uint64_t i = 0; i < 25; ++i) {
      for (std::uint64_t j = 0; j < 21; ++j) {
        push_le(memory->read_cell(i, j), 4);
      }
    }
    c.expect(bytes == expected, "spill file bytes match the layout exactly");
    fs::remove(file);
  }
  report("04 backing-equivalence", c.ok);
}

TEST_CASE("criterion 5: two-row residency at the 10k scale") {
  Checker c;
  const BigRun& run = big_disk_run();
  c.expect(run.result.stats.peak_resident_cells <= 2 * 10001,
           "peak resident cells bounded by two rows");
  c.expect(run.result.stats.backing == Backing::Disk, "run spilled to disk");
  const std::uint64_t expected_bytes = 24 + 10001ull * 10001ull * 4;
  c.expect(run.result.stats.spill_bytes == expected_bytes,
           "spill bytes counter matches header + cells");
  c.expect(run.spill_file_bytes == expected_bytes,
           "spill file size matches header + cells");
  report("05 residency-bound", c.ok);
}

TEST_CASE("criterion 6: backtracking reads O(N+M) rows") {
  Checker c;
  const BigRun& run = big_disk_run();
  c.expect(run.result.path.has_value(), "path present");
  c.expect(run.result.stats.backtrack_rows_read <= 10000 + 2,
           "distinct row fetches bounded by N+2, got " +
               std::to_string(run.result.stats.backtrack_rows_read));
  report("06 backtracking-io", c.ok);
}

TEST_CASE("criterion 7: approximation contracts") {
  Checker c;
  std::mt19937_64 rng(20240003);
  const DistanceSpec spec{};
  const EventDistance dist = make_distance(spec);

  for (int trial = 0; trial < 100; ++trial) {
    const Trace x =
        test_helpers::random_trace(1 + rng() % 128, 1 + rng() % 6, rng());
    const Trace y =
        test_helpers::random_trace(1 + rng() % 128, 1 + rng() % 6, rng());
    const Cost exact = align(x, y, {.distance = spec}).result.cost;

    auto banded_store =
        make_memory_store(x.length() + 1, y.length() + 1, CellWidth::W8, true);
    const Cost full_band_cost =
        dtw_banded(x, y, dist, full_band(x.length(), y.length()),
                   *banded_store)
            .cost;

    AlignConfig wide{.distance = spec};
    wide.mode = AlignMode::FastDtw;
    wide.fastdtw.radius = std::max(x.length(), y.length());
    const Cost wide_cost = align(x, y, wide).result.cost;

    AlignConfig narrow{.distance = spec};
    narrow.mode = AlignMode::FastDtw;
    narrow.fastdtw.radius = 1;
    const Cost narrow_cost = align(x, y, narrow).result.cost;

    if (full_band_cost != exact || wide_cost != exact ||
        narrow_cost < exact) {
      c.expect(false, "approximation contract broken at trial " +
                          std::to_string(trial));
      break;
    }
  }

  // Cell growth on a doubling ladder stays subquadratic.
  std::uint64_t prev_cells = 0;
  for (const std::uint64_t size : {1000ull, 2000ull, 4000ull, 8000ull}) {
    const Trace x =
        synth_trace({.length = size, .alphabet_size = 8, .seed = 11});
    const Trace y =
        synth_trace({.length = size, .alphabet_size = 8, .seed = 12});
    AlignConfig config;
    config.mode = AlignMode::FastDtw;
    config.fastdtw.radius = 1;
    const std::uint64_t cells =
        align(x, y, config).result.stats.cells_computed;
    if (prev_cells != 0) {
      c.expect(cells < 4 * prev_cells,
               "cells per doubling grew by " +
                   std::to_string(double(cells) / double(prev_cells)) +
                   "x at size " + std::to_string(size));
    }
    prev_cells = cells;
  }
  report("07 approximation-contracts", c.ok);
}

TEST_CASE("criterion 8: same-page costs cluster below cross-page costs") {
  Checker c;
  const Corpus& corpus = clustering_corpus();

  Cost max_same = 0;
  Cost min_cross = kInfiniteCost;
  for (const auto& [x, y] : corpus.same_page) {
    max_same = std::max(max_same, corpus_cost(*x, *y, DistanceMode::Sen));
  }
  for (const auto& [x, y] : corpus.cross_page) {
    min_cross = std::min(min_cross, corpus_cost(*x, *y, DistanceMode::Sen));
  }
  c.expect(corpus.same_page.size() + corpus.cross_page.size() == 20,
           "20 sampled pairs");
  c.expect(max_same < min_cross,
           "same-page max " + std::to_string(max_same) +
               " must undercut cross-page min " + std::to_string(min_cross));
  report("08 clustering", c.ok);
}

TEST_CASE("criterion 9: operator-only distance narrows the margin") {
  Checker c;
  const Corpus& corpus = clustering_corpus();

  Cost sen_max_same = 0, inst_max_same = 0;
  Cost sen_min_cross = kInfiniteCost, inst_min_cross = kInfiniteCost;

  for (const auto& [x, y] : corpus.same_page) {
    const Cost sen = corpus_cost(*x, *y, DistanceMode::Sen);
    const Cost inst = corpus_cost(*x, *y, DistanceMode::Inst);
    c.expect(inst <= sen, "operator-only cost bounded by instruction cost");
    sen_max_same = std::max(sen_max_same, sen);
    inst_max_same = std::max(inst_max_same, inst);
  }
  for (const auto& [x, y] : corpus.cross_page) {
    const Cost sen = corpus_cost(*x, *y, DistanceMode::Sen);
    const Cost inst = corpus_cost(*x, *y, DistanceMode::Inst);
    c.expect(inst <= sen, "operator-only cost bounded by instruction cost");
    sen_min_cross = std::min(sen_min_cross, sen);
    inst_min_cross = std::min(inst_min_cross, inst);
  }

  const std::int64_t sen_margin =
      std::int64_t(sen_min_cross) - std::int64_t(sen_max_same);
  const std::int64_t inst_margin =
      std::int64_t(inst_min_cross) - std::int64_t(inst_max_same);
  c.expect(inst_margin <= sen_margin,
           "margin " + std::to_string(inst_margin) +
               " must not exceed the instruction-distance margin " +
               std::to_string(sen_margin));
  report("09 distance-sensitivity", c.ok);
}

TEST_CASE("criterion 10: exact-mode wall time is quadratic at desk scale") {
  Checker c;
  const std::vector<std::uint64_t> sizes{1000, 2000, 4000, 8000};
  std::vector<double> log_size, log_time;

  // Warmup to stabilize caches and the allocator.
  {
    const Trace w = synth_trace({.length = 1000, .alphabet_size = 16,
                                 .seed = 90});
    AlignConfig config;
    config.cost_only = true;
    align(w, w, config);
  }

  for (const std::uint64_t size : sizes) {
    const Trace x =
        synth_trace({.length = size, .alphabet_size = 16, .seed = 91});
    const Trace y =
        synth_trace({.length = size, .alphabet_size = 16, .seed = 92});
    std::vector<double> runs;
    for (int rep = 0; rep < 3; ++rep) {
      AlignConfig config;
      config.cost_only = true;
      const auto start = std::chrono::steady_clock::now();
      align(x, y, config);
      const auto end = std::chrono::steady_clock::now();
      runs.push_back(std::chrono::duration<double>(end - start).count());
    }
    std::sort(runs.begin(), runs.end());
    log_size.push_back(std::log(double(size)));
    log_time.push_back(std::log(runs[1]));  // median of three
  }

  // Least-squares slope of log(time) against log(size).
  const auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (const double x : v) s += x;
    return s / double(v.size());
  };
  const double mx = mean(log_size);
  const double my = mean(log_time);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < log_size.size(); ++i) {
    num += (log_size[i] - mx) * (log_time[i] - my);
    den += (log_size[i] - mx) * (log_size[i] - mx);
  }
  const double exponent = num / den;
  c.expect(exponent > 1.7 && exponent < 2.3,
           "fit exponent " + std::to_string(exponent) +
               " outside 2.0 +/- 0.3");
  report("10 quadratic-walltime", c.ok);
}

TEST_CASE("scratch cleanup") {
  std::error_code ec;
  fs::remove_all(scratch_dir(), ec);
  CHECK(!ec);
}
