#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcr/enriched_record.hpp"
#include "dcr/ledger.hpp"
#include "dcr/rational.hpp"
#include "dcr/registry.hpp"
#include "dcr/warehouse.hpp"

namespace dcr {

// Signed positions and gross counterparty exposures over enriched records.
struct PositionLedger {
  std::map<std::pair<std::string, std::string>, std::int64_t> positions;  // (lei, asset) -> signed
  std::map<std::pair<std::string, std::string>, std::int64_t> exposures;  // (lei, counterparty) -> gross

  void apply(const EnrichedRecord& record);
};

struct LargeExposureFlag {
  std::string counterparty;
  std::int64_t exposure = 0;
  Rational limit;  // 25% of Tier 1
};

struct MetricSet {
  std::string lei;
  std::int64_t as_of_height = -1;
  Rational leverage_ratio;
  Rational cet1_ratio;
  Rational lcr;
  Rational total_rwa;
  std::vector<LargeExposureFlag> large_exposure_flags;
};

// Consumes the ordered event stream, enriches registered institutions'
// events with reference data and appends them to the warehouse, advancing
// the persisted cursor atomically with each batch.
class Composer {
 public:
  struct Options {
    bool strict_unclassified = false;  // error instead of classify-as-OTHER
    std::int64_t lcr_window_blocks = 30;
    int drop_every_nth = 0;   // test-only fault injection; 0 disables
    bool registry_unavailable = false;  // test-only outage simulation
  };

  Composer(const ledger::Ledger& chain, const registry::Registry& reg, Warehouse& warehouse);
  Composer(const ledger::Ledger& chain, const registry::Registry& reg, Warehouse& warehouse,
           Options options);

  // Processes every event past the warehouse cursor in batches of
  // `batch_size`, each committed atomically; returns the number of records
  // appended. Idempotent: a second call at head appends nothing.
  std::size_t run_to_head(std::size_t batch_size = SIZE_MAX);
  // One batch of at most `max_events` events; returns records appended.
  std::size_t run_batch(std::size_t max_events);

  // Enrichment of a single event; nullopt means SKIP (no side registered and
  // opted in at the event height).
  std::optional<EnrichedRecord> enrich(const ledger::OnChainEvent& event) const;

  MetricSet compute_metrics(const std::string& lei, std::int64_t as_of_height) const;
  PositionLedger positions_at(std::int64_t as_of_height) const;

 private:
  const ledger::Ledger& chain_;
  const registry::Registry& registry_;
  Warehouse& warehouse_;
  Options options_;
  std::size_t enriched_count_ = 0;  // drives drop_every_nth
};

}  // namespace dcr
