#include "dcr/harness/latency.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "dcr/composer.hpp"
#include "dcr/warehouse.hpp"

namespace dcr::harness {

using ordered_json = nlohmann::ordered_json;

LatencyReport run_latency(const ScenarioParams& params) {
  LatencyReport report;
  report.seed = params.seed;
  report.blocks = params.n_blocks;
  report.period_blocks = params.reporting_period_blocks;

  ScenarioStepper stepper(params);
  Warehouse warehouse(stepper.registry(), Policy::defaults(), MaskingPolicy{});
  Composer composer(stepper.chain(), stepper.registry(), warehouse);

  const std::int64_t period = params.reporting_period_blocks;
  std::int64_t pull_total = 0;
  std::int64_t push_total = 0;
  std::size_t events_before = 0;

  while (stepper.append_next_block()) {
    const std::int64_t height = stepper.chain().head_height();
    composer.run_to_head();  // pull refresh happens every block

    const std::size_t events_now = stepper.chain().events().size();
    const std::int64_t new_events = static_cast<std::int64_t>(events_now - events_before);
    events_before = events_now;
    if (new_events == 0) continue;
    report.events += new_events;

    // Every event of this block becomes pullable at the refreshed head.
    const std::int64_t pull_lag = warehouse.head_height() - height;
    pull_total += pull_lag * new_events;
    report.pull_max_lag = std::max(report.pull_max_lag, pull_lag);

    // A batch submission covering this event lands at the next period
    // boundary at or after its block.
    const std::int64_t next_boundary = ((height + period - 1) / period) * period;
    const std::int64_t push_lag = next_boundary - height;
    push_total += push_lag * new_events;
    report.push_max_lag = std::max(report.push_max_lag, push_lag);
  }

  if (report.events > 0) {
    report.pull_mean_lag = static_cast<double>(pull_total) / static_cast<double>(report.events);
    report.push_mean_lag = static_cast<double>(push_total) / static_cast<double>(report.events);
  }
  return report;
}

std::string to_json(const LatencyReport& report) {
  ordered_json doc;
  doc["seed"] = report.seed;
  doc["blocks"] = report.blocks;
  doc["period_blocks"] = report.period_blocks;
  doc["events"] = report.events;
  doc["pull"] = {{"mean_lag_blocks", report.pull_mean_lag},
                 {"max_lag_blocks", report.pull_max_lag}};
  doc["push"] = {{"mean_lag_blocks", report.push_mean_lag},
                 {"max_lag_blocks", report.push_max_lag}};
  return doc.dump(2);
}

}  // namespace dcr::harness
