#include "tracealign/distance.hpp"

#include <string>
#include <unordered_map>
#include <utility>

#include "tracealign/errors.hpp"

namespace tracealign {

void DistanceSpec::validate() const {
  if (gap_cost >= mismatch_cost && !allow_gap_geq_mismatch) {
    throw ConfigError(
        "gap cost (" + std::to_string(gap_cost) +
        ") must be less than mismatch cost (" + std::to_string(mismatch_cost) +
        "); pass allow_gap_geq_mismatch to override");
  }
  if (match_cost > gap_cost) {
    throw ConfigError("match cost (" + std::to_string(match_cost) +
                      ") must not exceed gap cost (" +
                      std::to_string(gap_cost) + ")");
  }
}

Cost d_sen(const TraceEvent& a, const TraceEvent& b,
           const DistanceSpec& spec) {
  return a.same_instruction(b) ? spec.match_cost : spec.mismatch_cost;
}

Cost d_inst(const TraceEvent& a, const TraceEvent& b,
            const DistanceSpec& spec) {
  return a.op == b.op ? spec.match_cost : spec.mismatch_cost;
}

EventDistance::EventDistance(DistanceSpec spec, CustomFn custom)
    : spec_(spec), custom_(std::move(custom)) {}

Cost EventDistance::operator()(const TraceEvent& a, const TraceEvent& b) const {
  switch (spec_.mode) {
    case DistanceMode::Sen:
      return d_sen(a, b, spec_);
    case DistanceMode::Inst:
      return d_inst(a, b, spec_);
    case DistanceMode::Custom: {
      const Cost value = custom_(a, b);
      if (value > spec_.mismatch_cost) {
        throw ConfigError("custom distance returned " + std::to_string(value) +
                          ", above the mismatch cost bound " +
                          std::to_string(spec_.mismatch_cost));
      }
      return value;
    }
  }
  return spec_.mismatch_cost;
}

void EventDistance::build_keys(const Trace& x, const Trace& y,
                               std::vector<std::uint32_t>& keys_x,
                               std::vector<std::uint32_t>& keys_y) const {
  std::unordered_map<std::string, std::uint32_t> table;
  table.reserve(x.length() + y.length());
  const bool full_instruction = spec_.mode == DistanceMode::Sen;

  const auto intern = [&](const TraceEvent& e) {
    std::string key = full_instruction ? e.canonical_key() : e.op;
    const auto [it, inserted] =
        table.try_emplace(std::move(key),
                          static_cast<std::uint32_t>(table.size()));
    return it->second;
  };

  keys_x.clear();
  keys_x.reserve(x.length());
  for (const auto& e : x.events) keys_x.push_back(intern(e));
  keys_y.clear();
  keys_y.reserve(y.length());
  for (const auto& e : y.events) keys_y.push_back(intern(e));
}

EventDistance make_distance(const DistanceSpec& spec,
                            EventDistance::CustomFn custom) {
  spec.validate();
  if (spec.mode == DistanceMode::Custom && !custom) {
    throw ConfigError("custom distance mode requires a distance function");
  }
  return EventDistance(spec, std::move(custom));
}

}  // namespace tracealign
