#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dcr/composer.hpp"
#include "dcr/harness/scenario.hpp"
#include "dcr/mrer/template.hpp"

namespace dcr::harness {

struct Mismatch {
  std::string template_id;
  std::string scope;        // printable scope
  std::int64_t period_end = 0;
  std::string item;         // data-point id or "validation:<rule_id>"
  std::string pull_value;
  std::string push_value;
};

struct EquivalenceReport {
  std::uint64_t seed = 0;
  std::size_t instances_compared = 0;
  std::size_t points_compared = 0;
  std::vector<Mismatch> mismatches;

  bool equivalent() const { return mismatches.empty(); }
};

// Period ends: every multiple of `period_blocks` up to and including the head.
std::vector<std::int64_t> period_ends(std::int64_t head_height, std::int64_t period_blocks);

// End-to-end equivalence run for one seed: generates the scenario, drives the
// pull pipeline (composer -> warehouse -> hierarchical aggregation), replays
// the serialized exports through the independent batch oracle, and compares
// every data point and validation verdict at every scope and period end.
// Integer-valued points must match exactly; fractional ones within 1e-9.
EquivalenceReport run_equivalence(const ScenarioParams& params,
                                  const std::vector<mrer::ReportTemplate>& templates,
                                  Composer::Options composer_options = {});

std::string to_json(const EquivalenceReport& report);

}  // namespace dcr::harness
