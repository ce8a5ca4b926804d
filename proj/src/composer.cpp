#include "dcr/composer.hpp"

#include <algorithm>
#include <limits>

#include "dcr/errors.hpp"

namespace dcr {

void PositionLedger::apply(const EnrichedRecord& record) {
  const bool self_flow = record.from_lei && record.to_lei && *record.from_lei == *record.to_lei;
  if (record.from_lei && !self_flow) {
    positions[{*record.from_lei, record.asset_id}] -= record.amount;
    exposures[{*record.from_lei, record.counterparty_of_from()}] += record.amount;
  }
  if (record.to_lei && !self_flow) {
    positions[{*record.to_lei, record.asset_id}] += record.amount;
    exposures[{*record.to_lei, record.counterparty_of_to()}] += record.amount;
  }
}

Composer::Composer(const ledger::Ledger& chain, const registry::Registry& reg,
                   Warehouse& warehouse)
    : Composer(chain, reg, warehouse, Options{}) {}

Composer::Composer(const ledger::Ledger& chain, const registry::Registry& reg,
                   Warehouse& warehouse, Options options)
    : chain_(chain), registry_(reg), warehouse_(warehouse), options_(options) {}

std::optional<EnrichedRecord> Composer::enrich(const ledger::OnChainEvent& event) const {
  // A side participates only once its institution is bound and opted in at
  // the event height; anything else is external.
  auto resolve = [&](const std::optional<std::string>& address)
      -> std::optional<std::string> {
    if (!address) return std::nullopt;
    auto lei = registry_.lookup_address(*address, event.height);
    if (!lei) return std::nullopt;
    const auto* inst = registry_.find_institution(*lei);
    if (!inst || inst->opt_in_height > event.height) return std::nullopt;
    return lei;
  };

  EnrichedRecord record;
  record.from_lei = resolve(event.from);
  record.to_lei = resolve(event.to);
  if (!record.from_lei && !record.to_lei) return std::nullopt;

  record.height = event.height;
  record.index_in_block = event.index_in_block;
  record.tx_id = event.tx_id;
  record.kind = event.kind;
  record.asset_id = event.asset_id;
  record.amount = event.amount;
  record.contract_tag = event.contract_tag;

  auto classification = registry_.classification(event.asset_id);
  if (!classification) {
    if (options_.strict_unclassified)
      throw error(errc::unclassified_asset, event.asset_id);
    // Default policy: treat as OTHER at full risk weight and carry on.
    classification = registry::AssetClassification{event.asset_id,
                                                   registry::ExposureClass::other,
                                                   Rational(1),
                                                   registry::HqlaLevel::none,
                                                   Rational(1),
                                                   Rational(1)};
  }
  record.exposure_class = classification->exposure_class;
  record.risk_weight = classification->risk_weight;
  record.hqla_level = classification->hqla_level;
  record.inflow_factor = classification->inflow_factor;
  record.outflow_factor = classification->outflow_factor;

  auto jurisdiction_of = [&](const std::optional<std::string>& lei)
      -> std::optional<std::string> {
    if (!lei) return std::nullopt;
    const auto* inst = registry_.find_institution(*lei);
    return inst ? std::optional(inst->jurisdiction) : std::nullopt;
  };
  record.jurisdiction_from = jurisdiction_of(record.from_lei);
  record.jurisdiction_to = jurisdiction_of(record.to_lei);
  return record;
}

std::size_t Composer::run_batch(std::size_t max_events) {
  if (options_.registry_unavailable)
    throw error(errc::registry_unavailable, "aborting before cursor advance");

  auto subscription = chain_.subscribe(warehouse_.cursor());
  std::vector<EnrichedRecord> batch;
  ledger::Cursor new_cursor = subscription.cursor();
  std::size_t consumed = 0;
  while (consumed < max_events) {
    auto event = subscription.next();
    if (!event) break;
    ++consumed;
    new_cursor = ledger::Cursor{event->height, event->index_in_block};
    if (auto record = enrich(*event)) {
      ++enriched_count_;
      if (options_.drop_every_nth > 0 && enriched_count_ % options_.drop_every_nth == 0)
        continue;
      batch.push_back(std::move(*record));
    }
  }
  if (consumed == 0) return 0;
  std::size_t appended = batch.size();
  warehouse_.append_batch(std::move(batch), new_cursor);
  return appended;
}

std::size_t Composer::run_to_head(std::size_t batch_size) {
  std::size_t total = 0;
  for (;;) {
    ledger::Cursor before = warehouse_.cursor();
    total += run_batch(batch_size);
    if (warehouse_.cursor() == before) break;
  }
  // Trailing blocks whose events were all skipped (or that are empty) still
  // count as processed; the pull head must reach the chain tip.
  if (chain_.head_height() > warehouse_.cursor().height)
    warehouse_.append_batch({}, ledger::Cursor{chain_.head_height(),
                                               std::numeric_limits<int>::max()});
  return total;
}

PositionLedger Composer::positions_at(std::int64_t as_of_height) const {
  PositionLedger positions;
  for (const auto& record : warehouse_.records_up_to(as_of_height)) positions.apply(record);
  return positions;
}

MetricSet Composer::compute_metrics(const std::string& lei, std::int64_t as_of_height) const {
  const auto* inst = registry_.find_institution(lei);
  if (!inst) throw error(errc::unknown_lei, lei);
  const auto figures = registry_.figures_at(lei, as_of_height);

  const auto records = warehouse_.records_up_to(as_of_height);
  PositionLedger positions;
  for (const auto& record : records) positions.apply(record);

  MetricSet metrics;
  metrics.lei = lei;
  metrics.as_of_height = as_of_height;

  Rational total_exposure = 0;
  Rational hqla_adjusted = Rational(figures.hqla);
  for (const auto& [key, signed_position] : positions.positions) {
    if (key.first != lei || signed_position <= 0) continue;
    total_exposure += signed_position;
    auto classification = registry_.classification(key.second);
    Rational risk_weight = classification ? classification->risk_weight : Rational(1);
    metrics.total_rwa += Rational(signed_position) * risk_weight;
    if (classification) {
      switch (classification->hqla_level) {
        case registry::HqlaLevel::l1: hqla_adjusted += Rational(signed_position); break;
        case registry::HqlaLevel::l2a:
          hqla_adjusted += Rational(signed_position) * Rational(85, 100);
          break;
        case registry::HqlaLevel::l2b:
          hqla_adjusted += Rational(signed_position) * Rational(1, 2);
          break;
        case registry::HqlaLevel::none: break;
      }
    }
  }

  metrics.leverage_ratio = total_exposure == 0 ? Rational(0) : Rational(figures.tier1) / total_exposure;
  metrics.cet1_ratio = metrics.total_rwa == 0 ? Rational(0) : Rational(figures.cet1) / metrics.total_rwa;

  // LCR over the trailing window (as_of - W, as_of].
  Rational outflows = 0;
  Rational inflows = 0;
  const std::int64_t window_start = as_of_height - options_.lcr_window_blocks;
  for (const auto& record : records) {
    if (record.height <= window_start) continue;
    if (record.from_lei && *record.from_lei == lei)
      outflows += Rational(record.amount) * record.outflow_factor;
    if (record.to_lei && *record.to_lei == lei)
      inflows += Rational(record.amount) * record.inflow_factor;
  }
  Rational inflow_cap = Rational(3, 4) * outflows;
  Rational capped_inflows = std::min(inflows, inflow_cap);
  Rational net_outflows = outflows - capped_inflows;
  if (net_outflows < 1) net_outflows = 1;
  metrics.lcr = hqla_adjusted / net_outflows;

  const Rational limit = Rational(figures.tier1) * Rational(1, 4);
  for (const auto& [key, exposure] : positions.exposures) {
    if (key.first != lei || key.second == lei) continue;
    if (Rational(exposure) > limit)
      metrics.large_exposure_flags.push_back(LargeExposureFlag{key.second, exposure, limit});
  }
  return metrics;
}

}  // namespace dcr
