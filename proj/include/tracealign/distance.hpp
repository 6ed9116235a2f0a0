#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "tracealign/trace.hpp"

namespace tracealign {

using Cost = std::uint64_t;

// Sentinel for cells outside a band; never written to a store as a real cost.
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::max();

inline Cost saturating_add(Cost a, Cost b) {
  return a > kInfiniteCost - b ? kInfiniteCost : a + b;
}

inline Cost saturating_mul(Cost a, Cost b) {
  if (a == 0 || b == 0) return 0;
  return a > kInfiniteCost / b ? kInfiniteCost : a * b;
}

enum class DistanceMode { Sen, Inst, Custom };

struct DistanceSpec {
  DistanceMode mode = DistanceMode::Sen;
  std::uint32_t mismatch_cost = 5;  // s
  std::uint32_t match_cost = 0;     // c
  std::uint32_t gap_cost = 1;       // gamma
  bool allow_gap_geq_mismatch = false;

  // Enforces gap < mismatch (unless overridden) and match <= gap.
  void validate() const;
};

// Match requires the identical canonical instruction (operator + operands).
Cost d_sen(const TraceEvent& a, const TraceEvent& b, const DistanceSpec& spec);

// Match requires only the same operator.
Cost d_inst(const TraceEvent& a, const TraceEvent& b,
            const DistanceSpec& spec);

// A total, deterministic, symmetric event-pair distance. SEN and INST
// distances are key-comparable: events can be projected to integer keys such
// that d(a, b) == match_cost iff key(a) == key(b), which the alignment
// engines use to avoid per-cell string comparisons.
class EventDistance {
 public:
  using CustomFn = std::function<Cost(const TraceEvent&, const TraceEvent&)>;

  EventDistance() : EventDistance(DistanceSpec{}, nullptr) {}
  EventDistance(DistanceSpec spec, CustomFn custom);

  Cost operator()(const TraceEvent& a, const TraceEvent& b) const;

  const DistanceSpec& spec() const { return spec_; }
  bool keyable() const { return spec_.mode != DistanceMode::Custom; }

  // Projects both traces onto one shared key space. Precondition: keyable().
  void build_keys(const Trace& x, const Trace& y,
                  std::vector<std::uint32_t>& keys_x,
                  std::vector<std::uint32_t>& keys_y) const;

 private:
  DistanceSpec spec_;
  CustomFn custom_;
};

// Validates the spec and wraps it; CUSTOM mode requires a function whose
// values stay within [0, mismatch_cost].
EventDistance make_distance(const DistanceSpec& spec,
                            EventDistance::CustomFn custom = nullptr);

}  // namespace tracealign
