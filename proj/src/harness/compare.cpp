#include "dcr/harness/compare.hpp"

#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "dcr/harness/push_oracle.hpp"
#include "dcr/warehouse.hpp"

namespace dcr::harness {

using ordered_json = nlohmann::ordered_json;

std::vector<std::int64_t> period_ends(std::int64_t head_height, std::int64_t period_blocks) {
  std::vector<std::int64_t> ends;
  for (std::int64_t h = period_blocks; h <= head_height; h += period_blocks) ends.push_back(h);
  return ends;
}

namespace {

bool values_match(const Rational& pull, const Rational& push) {
  if (pull == push) return true;
  if (is_integer(pull) || is_integer(push)) return false;  // integers must be exact
  Rational diff = pull - push;
  if (diff < 0) diff = -diff;
  return diff <= Rational(1, 1000000000);
}

void compare_instance(const mrer::ReportInstance& pull, const mrer::ReportInstance& push,
                      std::int64_t period_end, EquivalenceReport& report) {
  ++report.instances_compared;
  const std::string scope_name = to_string(pull.scope);

  std::map<std::string, Rational> push_values(push.values.begin(), push.values.end());
  for (const auto& [id, pull_value] : pull.values) {
    ++report.points_compared;
    auto it = push_values.find(id);
    if (it == push_values.end()) {
      report.mismatches.push_back(
          {pull.template_id, scope_name, period_end, id, render_decimal(pull_value), "<absent>"});
      continue;
    }
    if (!values_match(pull_value, it->second))
      report.mismatches.push_back({pull.template_id, scope_name, period_end, id,
                                   render_decimal(pull_value), render_decimal(it->second)});
  }

  std::map<std::string, bool> push_rules;
  for (const auto& result : push.validation_results) push_rules[result.rule_id] = result.passed;
  for (const auto& result : pull.validation_results) {
    ++report.points_compared;
    auto it = push_rules.find(result.rule_id);
    const std::string pull_verdict = result.passed ? "pass" : "fail";
    if (it == push_rules.end()) {
      report.mismatches.push_back({pull.template_id, scope_name, period_end,
                                   "validation:" + result.rule_id, pull_verdict, "<absent>"});
    } else if (it->second != result.passed) {
      report.mismatches.push_back({pull.template_id, scope_name, period_end,
                                   "validation:" + result.rule_id, pull_verdict,
                                   it->second ? "pass" : "fail"});
    }
  }
  if (push.validation_results.size() != pull.validation_results.size())
    report.mismatches.push_back({pull.template_id, scope_name, period_end, "validation:<count>",
                                 std::to_string(pull.validation_results.size()),
                                 std::to_string(push.validation_results.size())});
}

}  // namespace

EquivalenceReport run_equivalence(const ScenarioParams& params,
                                  const std::vector<mrer::ReportTemplate>& templates,
                                  Composer::Options composer_options) {
  EquivalenceReport report;
  report.seed = params.seed;

  Scenario scenario = generate_scenario(params);

  // Pull pipeline.
  Warehouse warehouse(scenario.registry, Policy::defaults(), MaskingPolicy{});
  Composer composer(scenario.chain, scenario.registry, warehouse, composer_options);
  composer.run_to_head();

  // Push oracle works only from the serialized exports.
  std::stringstream event_log, registry_doc;
  scenario.chain.export_events(event_log);
  scenario.registry.save(registry_doc);
  PushOracle oracle(event_log, registry_doc);

  const auto ends = period_ends(scenario.chain.head_height(), params.reporting_period_blocks);
  for (const auto& tmpl : templates) {
    for (std::int64_t period_end : ends) {
      auto push_reports = oracle.report_all_scopes(tmpl, period_end);
      for (const auto& [scope, push_instance] : push_reports) {
        auto pull_instance = warehouse.aggregate_report(tmpl, scope, period_end);
        compare_instance(pull_instance, push_instance, period_end, report);
      }
    }
  }
  return report;
}

std::string to_json(const EquivalenceReport& report) {
  ordered_json doc;
  doc["seed"] = report.seed;
  doc["instances_compared"] = report.instances_compared;
  doc["points_compared"] = report.points_compared;
  doc["equivalent"] = report.equivalent();
  doc["mismatches"] = ordered_json::array();
  for (const auto& mismatch : report.mismatches) {
    doc["mismatches"].push_back({{"template_id", mismatch.template_id},
                                 {"scope", mismatch.scope},
                                 {"period_end", mismatch.period_end},
                                 {"item", mismatch.item},
                                 {"pull", mismatch.pull_value},
                                 {"push", mismatch.push_value}});
  }
  return doc.dump(2);
}

}  // namespace dcr::harness
