#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctype>
#include <random>
#include <set>

#include "dcr/composer.hpp"
#include "dcr/errors.hpp"
#include "dcr/harness/scenario.hpp"
#include "dcr/masking.hpp"
#include "dcr/warehouse.hpp"

using namespace dcr;

TEST_CASE("pseudonyms are keyed, stable, and 16 lowercase hex characters") {
  std::string a1 = pseudonymize("key", "5299DKBANKA000000001");
  std::string a2 = pseudonymize("key", "5299DKBANKA000000001");
  std::string b = pseudonymize("key", "5299DKBANKB000000002");
  std::string a_other_key = pseudonymize("other", "5299DKBANKA000000001");
  CHECK(a1 == a2);
  CHECK(a1 != b);
  CHECK(a1 != a_other_key);
  for (const std::string& p : {a1, b, a_other_key}) {
    CHECK(p.size() == 16);
    for (char c : p) CHECK((std::isdigit(c) || (c >= 'a' && c <= 'f')));
  }
  // A pseudonym never leaks the input.
  CHECK(a1.find("5299") == std::string::npos);
}

TEST_CASE("truncate_amount floors to the bucket") {
  CHECK(truncate_amount(1234, 100) == 1200);
  CHECK(truncate_amount(1200, 100) == 1200);
  CHECK(truncate_amount(99, 100) == 0);
  CHECK(truncate_amount(0, 100) == 0);
  CHECK(truncate_amount(7, 1) == 7);
  CHECK_THROWS_AS(truncate_amount(1, 0), dcr::error);
  CHECK_THROWS_AS(truncate_amount(1, -5), dcr::error);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    std::int64_t amount = static_cast<std::int64_t>(rng() % 1000000);
    std::int64_t bucket = static_cast<std::int64_t>(rng() % 500) + 1;
    std::int64_t truncated = truncate_amount(amount, bucket);
    CHECK(truncated % bucket == 0);
    CHECK(truncated <= amount);
    CHECK(amount - truncated < bucket);
  }
}

namespace {

registry::Registry two_banks() {
  registry::Registry reg;
  for (auto [lei, jurisdiction] :
       {std::pair{"5299DKBANKA000000001", "DK"}, std::pair{"5299DEBANKB000000002", "DE"}}) {
    registry::InstitutionRecord record;
    record.lei = lei;
    record.name = "Bank";
    record.jurisdiction = jurisdiction;
    record.authority_id = std::string("NCA-") + jurisdiction;
    record.opt_in_height = 0;
    record.capital_figures.push_back(registry::CapitalFigures{100, 80, 50, 0});
    reg.register_institution(std::move(record));
  }
  return reg;
}

EnrichedRecord cross_border_transfer() {
  EnrichedRecord record;
  record.height = 3;
  record.index_in_block = 1;
  record.tx_id = "T3_1";
  record.kind = ledger::TxKind::transfer;
  record.asset_id = "X";
  record.amount = 1234;
  record.from_lei = "5299DKBANKA000000001";
  record.to_lei = "5299DEBANKB000000002";
  record.jurisdiction_from = "DK";
  record.jurisdiction_to = "DE";
  record.risk_weight = 1;
  return record;
}

}  // namespace

TEST_CASE("mask respects clearance side by side") {
  auto reg = two_banks();
  MaskingPolicy policy;
  policy.pseudonym_key = "secret";
  EnrichedRecord record = cross_border_transfer();

  Role bank_a{"bank-a", RoleKind::bank, "DK", "5299DKBANKA000000001", Clearance::granular_own};
  MaskedRecord as_a = mask(record, bank_a, policy, reg);
  CHECK(as_a.from_party == "5299DKBANKA000000001");
  CHECK(as_a.to_party == pseudonymize("secret", "5299DEBANKB000000002"));
  CHECK(as_a.amount == 1200);  // one side masked, amount bucketed

  Role nca_de{"nca-de", RoleKind::nca, "DE", std::nullopt, Clearance::granular_jurisdiction};
  MaskedRecord as_de = mask(record, nca_de, policy, reg);
  CHECK(as_de.to_party == "5299DEBANKB000000002");
  CHECK(as_de.from_party == pseudonymize("secret", "5299DKBANKA000000001"));
  CHECK(as_de.amount == 1200);

  Role nca_dk{"nca-dk", RoleKind::nca, "DK", std::nullopt, Clearance::granular_jurisdiction};
  MaskedRecord as_dk = mask(record, nca_dk, policy, reg);
  CHECK(as_dk.from_party == "5299DKBANKA000000001");
  CHECK(as_dk.to_party != "5299DEBANKB000000002");

  Role eba{"eba", RoleKind::eba, std::nullopt, std::nullopt, Clearance::aggregate_all};
  MaskedRecord as_eba = mask(record, eba, policy, reg);
  CHECK(as_eba.from_party != "5299DKBANKA000000001");
  CHECK(as_eba.to_party != "5299DEBANKB000000002");
  CHECK(as_eba.amount == 1200);

  // External sides stay EXTERNAL and an unmasked record keeps its amount.
  EnrichedRecord issue = cross_border_transfer();
  issue.from_lei = std::nullopt;
  issue.jurisdiction_from = std::nullopt;
  MaskedRecord issue_de = mask(issue, nca_de, policy, reg);
  CHECK(issue_de.from_party == "EXTERNAL");
  CHECK(issue_de.to_party == "5299DEBANKB000000002");
  CHECK(issue_de.amount == 1234);  // nothing masked
}

TEST_CASE("corpus scan: a bank's masked feed never leaks another institution's lei") {
  harness::ScenarioParams params;
  params.seed = 5;
  params.n_blocks = 60;
  auto scenario = harness::generate_scenario(params);
  Warehouse warehouse(scenario.registry, Policy::defaults(), MaskingPolicy{});
  Composer composer(scenario.chain, scenario.registry, warehouse);
  composer.run_to_head();

  MaskingPolicy policy;
  policy.pseudonym_key = "corpus-key";
  const auto institutions = scenario.registry.institutions();
  REQUIRE(institutions.size() >= 4);

  // Pseudonyms must not collide across the corpus.
  std::set<std::string> pseudonyms;
  for (const auto* inst : institutions) pseudonyms.insert(pseudonymize("corpus-key", inst->lei));
  CHECK(pseudonyms.size() == institutions.size());

  const std::string viewer = institutions.front()->lei;
  Role bank{"bank", RoleKind::bank, institutions.front()->jurisdiction, viewer,
            Clearance::granular_own};
  int masked_lines = 0;
  for (const auto& record : warehouse.records_up_to(warehouse.head_height())) {
    std::string line = mask(record, bank, policy, scenario.registry).to_json_line();
    for (const auto* inst : institutions) {
      if (inst->lei == viewer) continue;
      CHECK(line.find(inst->lei) == std::string::npos);
    }
    ++masked_lines;
  }
  CHECK(masked_lines > 100);
}
