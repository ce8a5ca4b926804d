#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "dcr/composer.hpp"
#include "dcr/errors.hpp"
#include "dcr/harness/scenario.hpp"
#include "dcr/warehouse.hpp"

using namespace dcr;
using dcr::harness::ScenarioParams;

namespace {

const std::string kLeiA = "5299DKBANKA000000001";
const std::string kLeiB = "5299DKBANKB000000002";

registry::Registry two_banks(std::int64_t opt_in_b = 0) {
  registry::Registry reg;
  for (auto [lei, opt_in] : {std::pair{kLeiA, std::int64_t(0)}, std::pair{kLeiB, opt_in_b}}) {
    registry::InstitutionRecord record;
    record.lei = lei;
    record.name = "Bank";
    record.jurisdiction = "DK";
    record.authority_id = "NCA-DK";
    record.opt_in_height = opt_in;
    record.capital_figures.push_back(registry::CapitalFigures{100, 80, 50, opt_in});
    reg.register_institution(std::move(record));
  }
  reg.bind_address(registry::AddressBinding{"A", kLeiA, 0, std::nullopt});
  reg.bind_address(registry::AddressBinding{"B", kLeiB, opt_in_b, std::nullopt});
  reg.classify_asset(registry::AssetClassification{"BOND1", registry::ExposureClass::sovereign,
                                                   Rational(0), registry::HqlaLevel::l1,
                                                   Rational(1, 20), Rational(1, 2)});
  return reg;
}

ledger::Transaction tx(std::string id, ledger::TxKind kind, std::string asset,
                       std::optional<std::string> from, std::optional<std::string> to,
                       std::int64_t amount) {
  ledger::Transaction t;
  t.tx_id = std::move(id);
  t.kind = kind;
  t.asset_id = std::move(asset);
  t.from = std::move(from);
  t.to = std::move(to);
  t.amount = amount;
  return t;
}

}  // namespace

TEST_CASE("transfer between two registered banks yields one fully joined record") {
  auto reg = two_banks();
  ledger::Ledger chain;
  chain.append_block({tx("T1", ledger::TxKind::issue, "BOND1", std::nullopt, "A", 100),
                      tx("T2", ledger::TxKind::transfer, "BOND1", "A", "B", 40)});
  Warehouse warehouse(reg, Policy::defaults(), MaskingPolicy{});
  Composer composer(chain, reg, warehouse);
  CHECK(composer.run_to_head() == 2);
  auto records = warehouse.records_up_to(0);
  REQUIRE(records.size() == 2);
  const auto& transfer = records[1];
  CHECK(transfer.from_lei == kLeiA);
  CHECK(transfer.to_lei == kLeiB);
  CHECK(transfer.exposure_class == registry::ExposureClass::sovereign);
  CHECK(transfer.risk_weight == 0);
  CHECK(transfer.hqla_level == registry::HqlaLevel::l1);
  CHECK(transfer.jurisdiction_from == "DK");
  CHECK(transfer.owner_lei() == kLeiB);
  CHECK(transfer.direction() == "IN");
}

TEST_CASE("unregistered-only events are skipped but the cursor advances") {
  auto reg = two_banks();
  ledger::Ledger chain;
  chain.append_block({tx("T1", ledger::TxKind::issue, "BOND1", std::nullopt, "X", 100),
                      tx("T2", ledger::TxKind::transfer, "BOND1", "X", "Y", 40)});
  Warehouse warehouse(reg, Policy::defaults(), MaskingPolicy{});
  Composer composer(chain, reg, warehouse);
  CHECK(composer.run_to_head() == 0);
  CHECK(warehouse.record_count() == 0);
  CHECK(warehouse.head_height() == 0);
  CHECK(composer.run_to_head() == 0);  // idempotent at head
}

TEST_CASE("ISSUE of a sovereign asset: external from-side, risk weight 0") {
  auto reg = two_banks();
  ledger::Ledger chain;
  chain.append_block({tx("T1", ledger::TxKind::issue, "BOND1", std::nullopt, "A", 100)});
  Warehouse warehouse(reg, Policy::defaults(), MaskingPolicy{});
  Composer composer(chain, reg, warehouse);
  composer.run_to_head();
  auto records = warehouse.records_up_to(0);
  REQUIRE(records.size() == 1);
  CHECK(records[0].to_lei == kLeiA);
  CHECK_FALSE(records[0].from_lei);
  CHECK(records[0].counterparty_of_to() == "EXTERNAL");
  CHECK(records[0].risk_weight == 0);
}

TEST_CASE("events before an institution's opt-in height are external to it") {
  auto reg = two_banks(/*opt_in_b=*/20);
  ledger::Ledger chain;
  // Height 10: B not yet opted in -> only A's side resolves.
  std::vector<ledger::Transaction> txs = {
      tx("T1", ledger::TxKind::issue, "BOND1", std::nullopt, "A", 100)};
  for (int h = 0; h < 10; ++h) chain.append_block(h == 0 ? txs : std::vector<ledger::Transaction>{});
  chain.append_block({tx("T2", ledger::TxKind::transfer, "BOND1", "A", "B", 40)});
  Warehouse warehouse(reg, Policy::defaults(), MaskingPolicy{});
  Composer composer(chain, reg, warehouse);
  composer.run_to_head();
  auto records = warehouse.records_up_to(10);
  REQUIRE(records.size() == 2);
  CHECK(records[1].from_lei == kLeiA);
  CHECK_FALSE(records[1].to_lei);  // SKIP rule applies to the side, record kept for A
  CHECK(records[1].owner_lei() == kLeiA);

  // An event where the *only* candidate side is pre-opt-in is skipped outright.
  chain.append_block({tx("T3", ledger::TxKind::transfer, "BOND1", "B", "A", 10)});
  // ... but B -> A still resolves A. A pure B-only event:
  chain.append_block({tx("T4", ledger::TxKind::redeem, "BOND1", "B", std::nullopt, 5)});
  composer.run_to_head();
  auto all = warehouse.records_up_to(12);
  CHECK(all.size() == 3);  // T4 skipped: B alone and not opted in at height 12 < 20
}

TEST_CASE("strict mode rejects unclassified assets; default classifies as OTHER") {
  auto reg = two_banks();
  ledger::Ledger chain;
  chain.append_block({tx("T1", ledger::TxKind::issue, "MYSTERY", std::nullopt, "A", 10)});

  Warehouse lenient(reg, Policy::defaults(), MaskingPolicy{});
  Composer composer(chain, reg, lenient);
  composer.run_to_head();
  auto records = lenient.records_up_to(0);
  REQUIRE(records.size() == 1);
  CHECK(records[0].exposure_class == registry::ExposureClass::other);
  CHECK(records[0].risk_weight == 1);

  Warehouse strict_store(reg, Policy::defaults(), MaskingPolicy{});
  Composer::Options options;
  options.strict_unclassified = true;
  Composer strict(chain, reg, strict_store, options);
  CHECK_THROWS_AS(strict.run_to_head(), error);
}

TEST_CASE("registry outage aborts before the cursor advances") {
  auto reg = two_banks();
  ledger::Ledger chain;
  chain.append_block({tx("T1", ledger::TxKind::issue, "BOND1", std::nullopt, "A", 10)});
  Warehouse warehouse(reg, Policy::defaults(), MaskingPolicy{});
  Composer::Options options;
  options.registry_unavailable = true;
  Composer broken(chain, reg, warehouse, options);
  CHECK_THROWS_AS(broken.run_to_head(), error);
  CHECK(warehouse.cursor() == ledger::Cursor{});
  // Recovery run picks up from the sentinel with nothing lost.
  Composer recovered(chain, reg, warehouse);
  CHECK(recovered.run_to_head() == 1);
}

TEST_CASE("batch sizes 1, 7 and unbounded produce identical warehouses") {
  ScenarioParams params;
  params.seed = 1;
  auto scenario = dcr::harness::generate_scenario(params);
  std::string baseline;
  for (std::size_t batch : {std::size_t(1), std::size_t(7), SIZE_MAX}) {
    Warehouse warehouse(scenario.registry, Policy::defaults(), MaskingPolicy{});
    Composer composer(scenario.chain, scenario.registry, warehouse);
    composer.run_to_head(batch);
    std::ostringstream out;
    warehouse.export_records(out);
    if (baseline.empty())
      baseline = out.str();
    else
      CHECK(baseline == out.str());
    CHECK(warehouse.head_height() == scenario.chain.head_height());
  }
  CHECK(!baseline.empty());
}

TEST_CASE("enrichment equals a joint scan over event log and registry") {
  ScenarioParams params;
  params.seed = 4;
  params.n_blocks = 80;
  auto scenario = dcr::harness::generate_scenario(params);
  Warehouse warehouse(scenario.registry, Policy::defaults(), MaskingPolicy{});
  Composer composer(scenario.chain, scenario.registry, warehouse);
  composer.run_to_head();

  std::vector<EnrichedRecord> expected;
  for (const auto& event : scenario.chain.events()) {
    auto resolve = [&](const std::optional<std::string>& address) -> std::optional<std::string> {
      if (!address) return std::nullopt;
      auto lei = scenario.registry.lookup_address(*address, event.height);
      if (!lei) return std::nullopt;
      const auto* inst = scenario.registry.find_institution(*lei);
      if (!inst || inst->opt_in_height > event.height) return std::nullopt;
      return lei;
    };
    auto from_lei = resolve(event.from);
    auto to_lei = resolve(event.to);
    if (!from_lei && !to_lei) continue;
    EnrichedRecord record;
    record.tx_id = event.tx_id;
    record.from_lei = from_lei;
    record.to_lei = to_lei;
    expected.push_back(std::move(record));
  }
  auto actual = warehouse.records_up_to(scenario.chain.head_height());
  REQUIRE(actual.size() == expected.size());
  for (std::size_t i = 0; i < actual.size(); ++i) {
    CHECK(actual[i].tx_id == expected[i].tx_id);
    CHECK(actual[i].from_lei == expected[i].from_lei);
    CHECK(actual[i].to_lei == expected[i].to_lei);
  }
}

TEST_CASE("metrics: forced arithmetic for leverage, cet1 ratio, lcr and large exposures") {
  // tier1=8, cet1=8, one position of 100 at risk weight 1.
  registry::Registry reg;
  registry::InstitutionRecord record;
  record.lei = kLeiA;
  record.name = "Bank";
  record.jurisdiction = "DK";
  record.authority_id = "NCA-DK";
  record.opt_in_height = 0;
  record.capital_figures.push_back(registry::CapitalFigures{8, 8, 0, 0});
  reg.register_institution(std::move(record));
  reg.bind_address(registry::AddressBinding{"A", kLeiA, 0, std::nullopt});
  reg.classify_asset(registry::AssetClassification{"CORP", registry::ExposureClass::corporate,
                                                   Rational(1), registry::HqlaLevel::none,
                                                   Rational(1), Rational(1)});
  ledger::Ledger chain;
  chain.append_block({tx("T1", ledger::TxKind::issue, "CORP", std::nullopt, "A", 100)});
  Warehouse warehouse(reg, Policy::defaults(), MaskingPolicy{});
  Composer composer(chain, reg, warehouse);
  composer.run_to_head();

  MetricSet metrics = composer.compute_metrics(kLeiA, 0);
  CHECK(metrics.leverage_ratio == Rational(8, 100));
  CHECK(metrics.cet1_ratio == Rational(8, 100));
  CHECK(metrics.total_rwa == 100);
  // Issuer side is EXTERNAL with exposure 100 > 25% of tier1 (2).
  REQUIRE(metrics.large_exposure_flags.size() == 1);
  CHECK(metrics.large_exposure_flags[0].counterparty == "EXTERNAL");
  CHECK(metrics.large_exposure_flags[0].limit == Rational(2));
}

TEST_CASE("lcr forced arithmetic: 75 percent inflow cap") {
  // hqla figure 100; window outflows 80, inflows 90 -> capped 60, net 20, lcr 5.
  registry::Registry reg;
  registry::InstitutionRecord record;
  record.lei = kLeiA;
  record.name = "Bank";
  record.jurisdiction = "DK";
  record.authority_id = "NCA-DK";
  record.opt_in_height = 0;
  record.capital_figures.push_back(registry::CapitalFigures{1000, 800, 100, 0});
  reg.register_institution(std::move(record));
  reg.bind_address(registry::AddressBinding{"A", kLeiA, 0, std::nullopt});
  // NONE-level asset so positions do not add to the HQLA stock.
  reg.classify_asset(registry::AssetClassification{"CORP", registry::ExposureClass::corporate,
                                                   Rational(1), registry::HqlaLevel::none,
                                                   Rational(1), Rational(1)});
  ledger::Ledger chain;
  chain.append_block({tx("T1", ledger::TxKind::issue, "CORP", std::nullopt, "A", 90),
                      tx("T2", ledger::TxKind::redeem, "CORP", "A", std::nullopt, 80)});
  Warehouse warehouse(reg, Policy::defaults(), MaskingPolicy{});
  Composer composer(chain, reg, warehouse);
  composer.run_to_head();
  MetricSet metrics = composer.compute_metrics(kLeiA, 0);
  CHECK(metrics.lcr == Rational(5));
}
