#include "dcr/harness/scenario.hpp"

#include <algorithm>
#include <iterator>
#include <random>
#include <string>

#include "dcr/errors.hpp"

namespace dcr::harness {

namespace {

// Raw engine draws only; std::uniform_int_distribution is not pinned across
// standard libraries and would break seed reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }

 private:
  std::mt19937_64 engine_;
};

const char* kJurisdictions[] = {"DK", "DE", "FR", "NL", "SE", "IT", "ES", "PT"};

std::string make_lei(const std::string& jurisdiction, int index) {
  std::string tail = std::to_string(index);
  std::string lei = "5299" + jurisdiction + "BANK";
  lei += std::string(20 - lei.size() - tail.size(), '0');
  lei += tail;
  return lei;
}

struct Population {
  std::vector<std::string> bank_addresses;       // flattened, bank i owns [2i, 2i+1]
  std::vector<std::string> external_addresses;
  std::vector<std::string> asset_ids;
};

registry::Registry build_registry(const ScenarioParams& params, Rng& rng, Population& pop) {
  registry::Registry reg;
  const int n_jur = std::min<int>(params.n_jurisdictions, std::size(kJurisdictions));

  for (int i = 0; i < params.n_banks; ++i) {
    const std::string jurisdiction = kJurisdictions[i % n_jur];
    registry::InstitutionRecord inst;
    inst.lei = make_lei(jurisdiction, i + 1);
    inst.name = "Bank " + std::to_string(i + 1);
    inst.jurisdiction = jurisdiction;
    inst.authority_id = "NCA-" + jurisdiction;
    // Half the banks join late to exercise phased entry.
    inst.opt_in_height = (i % 2 == 0) ? 0 : rng.range(1, std::max<std::int64_t>(params.n_blocks / 4, 1));

    registry::CapitalFigures initial;
    initial.effective_height = inst.opt_in_height;
    initial.tier1 = rng.range(5'000'000, 50'000'000);
    initial.cet1 = initial.tier1 * rng.range(70, 100) / 100;
    initial.hqla = rng.range(1'000'000, 10'000'000);
    inst.capital_figures.push_back(initial);
    if (params.n_blocks > 120 && rng.chance(60)) {
      registry::CapitalFigures revised = initial;
      revised.effective_height = inst.opt_in_height + rng.range(40, 100);
      revised.tier1 += rng.range(-2'000'000, 4'000'000);
      if (revised.tier1 < 1'000'000) revised.tier1 = 1'000'000;
      revised.cet1 = revised.tier1 * rng.range(70, 100) / 100;
      revised.hqla = rng.range(1'000'000, 10'000'000);
      inst.capital_figures.push_back(revised);
    }
    const std::int64_t opt_in = inst.opt_in_height;
    reg.register_institution(std::move(inst));

    for (int a = 0; a < 2; ++a) {
      std::string address = "addr-bank" + std::to_string(i + 1) + "-" + std::to_string(a);
      reg.bind_address(registry::AddressBinding{address, make_lei(jurisdiction, i + 1), opt_in,
                                                std::nullopt});
      pop.bank_addresses.push_back(std::move(address));
    }
  }

  const int n_external = std::max(2, params.n_banks / 2);
  for (int i = 0; i < n_external; ++i)
    pop.external_addresses.push_back("addr-ext" + std::to_string(i + 1));

  struct AssetShape {
    registry::ExposureClass exposure_class;
    const char* risk_weight;
    registry::HqlaLevel hqla_level;
    const char* outflow_factor;
    const char* inflow_factor;
  };
  static const AssetShape shapes[] = {
      {registry::ExposureClass::sovereign, "0", registry::HqlaLevel::l1, "0.05", "0.5"},
      {registry::ExposureClass::institution, "0.2", registry::HqlaLevel::l2a, "0.25", "0.75"},
      {registry::ExposureClass::corporate, "1", registry::HqlaLevel::none, "0.4", "1"},
      {registry::ExposureClass::retail, "0.75", registry::HqlaLevel::none, "0.1", "0.5"},
      {registry::ExposureClass::other, "1", registry::HqlaLevel::l2b, "1", "1"},
  };
  for (int i = 0; i < params.n_assets; ++i) {
    const AssetShape& shape = shapes[i % std::size(shapes)];
    registry::AssetClassification asset;
    asset.asset_id = "ASSET" + std::to_string(i + 1);
    asset.exposure_class = shape.exposure_class;
    asset.risk_weight = parse_decimal(shape.risk_weight);
    asset.hqla_level = shape.hqla_level;
    asset.outflow_factor = parse_decimal(shape.outflow_factor);
    asset.inflow_factor = parse_decimal(shape.inflow_factor);
    pop.asset_ids.push_back(asset.asset_id);
    reg.classify_asset(std::move(asset));
  }
  return reg;
}

}  // namespace

struct ScenarioStepper::Impl {
  ScenarioParams params;
  Rng rng;
  Population pop;
  registry::Registry registry;
  ledger::Ledger chain;
  std::int64_t blocks_done = 0;
  std::int64_t tx_seq = 0;

  explicit Impl(const ScenarioParams& p) : params(p), rng(p.seed) {
    if (p.n_banks < 1 || p.n_jurisdictions < 1 || p.n_assets < 1 || p.n_blocks < 1 ||
        p.txs_per_block < 1 || p.reporting_period_blocks < 1)
      throw error(errc::file_format, "scenario params must all be >= 1");
    registry = build_registry(params, rng, pop);
  }

  const std::string& any_address() {
    // Bank addresses dominate so most events survive enrichment.
    if (!pop.external_addresses.empty() && rng.chance(20))
      return pop.external_addresses[rng.below(pop.external_addresses.size())];
    return pop.bank_addresses[rng.below(pop.bank_addresses.size())];
  }

  void append_block() {
    std::vector<ledger::Transaction> txs;
    // Local balance view so every drawn transaction is valid when applied in
    // block order.
    auto balance = [&](const std::string& addr, const std::string& asset) {
      std::int64_t value = chain.balance(addr, asset);
      for (const auto& tx : txs) {
        if (tx.asset_id != asset) continue;
        if (tx.from && *tx.from == addr) value -= tx.amount;
        if (tx.to && *tx.to == addr) value += tx.amount;
      }
      return value;
    };

    while (static_cast<int>(txs.size()) < params.txs_per_block) {
      ledger::Transaction tx;
      tx.tx_id = "T" + std::to_string(++tx_seq);
      tx.asset_id = pop.asset_ids[rng.below(pop.asset_ids.size())];
      const std::uint64_t roll = rng.below(100);
      if (roll < 30) {
        tx.kind = ledger::TxKind::issue;
        tx.to = any_address();
        tx.amount = rng.range(1'000, 100'000);
      } else if (roll < 40) {
        tx.kind = ledger::TxKind::redeem;
        tx.from = any_address();
        std::int64_t available = balance(*tx.from, tx.asset_id);
        if (available <= 0) { --tx_seq; continue; }  // retry with a fresh draw
        tx.amount = rng.range(1, available);
      } else if (roll < 90) {
        tx.kind = ledger::TxKind::transfer;
        tx.from = any_address();
        tx.to = any_address();
        if (*tx.from == *tx.to) { --tx_seq; continue; }
        std::int64_t available = balance(*tx.from, tx.asset_id);
        if (available <= 0) { --tx_seq; continue; }
        tx.amount = rng.range(1, std::min<std::int64_t>(available, 100'000));
      } else {
        tx.kind = ledger::TxKind::contract_call;
        tx.from = any_address();
        tx.to = any_address();
        if (*tx.from == *tx.to) { --tx_seq; continue; }
        std::int64_t available = balance(*tx.from, tx.asset_id);
        tx.amount = available > 0 ? rng.range(0, std::min<std::int64_t>(available, 10'000)) : 0;
        tx.contract_tag = rng.chance(50) ? "settle" : "collateral";
      }
      txs.push_back(std::move(tx));
    }
    chain.append_block(std::move(txs));
    ++blocks_done;
  }
};

ScenarioStepper::ScenarioStepper(const ScenarioParams& params)
    : impl_(std::make_unique<Impl>(params)) {}

ScenarioStepper::~ScenarioStepper() = default;

ledger::Ledger& ScenarioStepper::chain() { return impl_->chain; }
const registry::Registry& ScenarioStepper::registry() const { return impl_->registry; }

bool ScenarioStepper::append_next_block() {
  if (impl_->blocks_done >= impl_->params.n_blocks) return false;
  impl_->append_block();
  return true;
}

Scenario generate_scenario(const ScenarioParams& params) {
  ScenarioStepper stepper(params);
  while (stepper.append_next_block()) {
  }
  Scenario scenario{std::move(stepper.chain()), stepper.registry()};
  return scenario;
}

}  // namespace dcr::harness
