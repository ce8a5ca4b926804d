#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "dcr/ledger.hpp"
#include "dcr/registry.hpp"

namespace dcr::harness {

struct ScenarioParams {
  std::uint64_t seed = 1;
  int n_banks = 8;
  int n_jurisdictions = 3;
  int n_assets = 6;
  std::int64_t n_blocks = 200;
  int txs_per_block = 10;
  std::int64_t reporting_period_blocks = 30;
};

struct Scenario {
  ledger::Ledger chain;
  registry::Registry registry;
};

// Deterministic synthetic population: banks with staggered opt-in heights,
// assets across all exposure classes and HQLA levels, and blocks of valid
// transactions. A pure function of the seed.
Scenario generate_scenario(const ScenarioParams& params);

// Incremental form used by the latency harness: registry and block schedule
// are fixed up front, blocks are appended one at a time.
class ScenarioStepper {
 public:
  explicit ScenarioStepper(const ScenarioParams& params);
  ~ScenarioStepper();

  ledger::Ledger& chain();
  const registry::Registry& registry() const;
  bool append_next_block();  // false once n_blocks reached

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dcr::harness
