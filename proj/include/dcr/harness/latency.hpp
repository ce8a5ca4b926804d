#pragma once

#include <cstdint>
#include <string>

#include "dcr/harness/scenario.hpp"

namespace dcr::harness {

// Reporting lag in blocks between an event's inclusion and its first
// availability to an authority, contrasted across the two delivery models:
// the pull warehouse is refreshed every block, while batch submissions land
// only at period boundaries.
struct LatencyReport {
  std::uint64_t seed = 0;
  std::int64_t blocks = 0;
  std::int64_t period_blocks = 0;
  std::int64_t events = 0;
  double pull_mean_lag = 0;
  std::int64_t pull_max_lag = 0;
  double push_mean_lag = 0;
  std::int64_t push_max_lag = 0;
};

LatencyReport run_latency(const ScenarioParams& params);

std::string to_json(const LatencyReport& report);

}  // namespace dcr::harness
