#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <httplib.h>

#include <fstream>
#include <sstream>
#include <thread>

#include "dcr/errors.hpp"
#include "dcr/mrer/template.hpp"
#include "dcr/pull_service.hpp"
#include "dcr/warehouse.hpp"

using namespace dcr;

namespace {

const char* kTokensJson = R"({
  "operator_token": "t-op",
  "tokens": [
    {"token": "t-bank-a", "role_id": "bank-a", "kind": "BANK",
     "jurisdiction": "DK", "lei": "5299DKBANKA000000001"},
    {"token": "t-nca-dk", "role_id": "nca-dk", "kind": "NCA", "jurisdiction": "DK"},
    {"token": "t-eba", "role_id": "eba", "kind": "EBA"}
  ]})";

registry::Registry four_banks() {
  registry::Registry reg;
  for (auto [lei, jurisdiction] :
       {std::pair{"5299DKBANKA000000001", "DK"}, std::pair{"5299DKBANKB000000002", "DK"},
        std::pair{"5299DEBANKC000000003", "DE"}, std::pair{"5299DEBANKD000000004", "DE"}}) {
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

EnrichedRecord simple_record(std::int64_t height, int index, std::string owner_lei,
                             std::string jurisdiction, std::int64_t amount) {
  EnrichedRecord record;
  record.height = height;
  record.index_in_block = index;
  record.tx_id = "T" + std::to_string(height) + "_" + std::to_string(index);
  record.kind = ledger::TxKind::issue;
  record.asset_id = "X";
  record.amount = amount;
  record.to_lei = std::move(owner_lei);
  record.risk_weight = 1;
  record.inflow_factor = 1;
  record.outflow_factor = 1;
  record.jurisdiction_to = std::move(jurisdiction);
  return record;
}

void fill(Warehouse& warehouse) {
  warehouse.append_batch({simple_record(0, 0, "5299DKBANKA000000001", "DK", 100),
                          simple_record(3, 0, "5299DKBANKB000000002", "DK", 40),
                          simple_record(5, 0, "5299DEBANKC000000003", "DE", 45),
                          simple_record(7, 0, "5299DEBANKD000000004", "DE", 1234)},
                         ledger::Cursor{9, 0});
}

std::map<std::string, mrer::ReportTemplate> shipped_templates() {
  std::map<std::string, mrer::ReportTemplate> templates;
  for (const char* name : {"own_funds_mini", "liquidity_mini", "large_exposures_mini"}) {
    std::ifstream in(std::string(TEMPLATE_DIR) + "/" + name + ".template.json");
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto tmpl = mrer::parse_template(buffer.str());
    templates.emplace(tmpl.template_id, std::move(tmpl));
  }
  return templates;
}

struct RunningService {
  Warehouse warehouse;
  PullService service;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit RunningService(const registry::Registry& reg)
      : warehouse(reg, Policy::defaults(), MaskingPolicy{}),
        service((fill(warehouse), warehouse), shipped_templates(), [] {
          std::istringstream in(kTokensJson);
          return load_service_config(in);
        }()) {
    service.attach(server);
    port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  ~RunningService() {
    server.stop();
    thread.join();
  }

  httplib::Result get(const std::string& path, const std::string& token) {
    httplib::Client client("127.0.0.1", port);
    httplib::Headers headers;
    if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);
    return client.Get(path, headers);
  }
};

}  // namespace

TEST_CASE("load_service_config parses tokens and derives clearance") {
  std::istringstream in(kTokensJson);
  ServiceConfig config = load_service_config(in);
  CHECK(config.operator_token == "t-op");
  REQUIRE(config.tokens.size() == 3);
  const Role& bank = config.tokens.at("t-bank-a");
  CHECK(bank.kind == RoleKind::bank);
  CHECK(bank.lei == "5299DKBANKA000000001");
  CHECK(bank.clearance == Clearance::granular_own);
  const Role& nca = config.tokens.at("t-nca-dk");
  CHECK(nca.kind == RoleKind::nca);
  CHECK(nca.jurisdiction == "DK");
  CHECK_FALSE(nca.lei.has_value());
  CHECK(config.tokens.at("t-eba").clearance == Clearance::aggregate_all);

  std::istringstream bad("{\"tokens\": [{\"token\": \"x\"}]}");
  CHECK_THROWS_AS(load_service_config(bad), error);
}

TEST_CASE("authentication, authorization, and error mapping over HTTP") {
  auto reg = four_banks();
  RunningService running(reg);

  auto none = running.get("/head", "");
  REQUIRE(none);
  CHECK(none->status == 401);
  auto unknown = running.get("/head", "t-nope");
  REQUIRE(unknown);
  CHECK(unknown->status == 401);

  auto head = running.get("/head", "t-bank-a");
  REQUIRE(head);
  CHECK(head->status == 200);
  CHECK(head->body == "{\"head\":9}");

  // Bank: own LOCAL report allowed, NATIONAL denied.
  auto own = running.get(
      "/reports/own_funds_mini?scope_level=LOCAL&scope_key=5299DKBANKA000000001&as_of=9",
      "t-bank-a");
  REQUIRE(own);
  CHECK(own->status == 200);
  CHECK(own->body.find("\"rwa_total\":\"100\"") != std::string::npos);
  auto denied = running.get("/reports/own_funds_mini?scope_level=NATIONAL&scope_key=DK&as_of=9",
                            "t-bank-a");
  REQUIRE(denied);
  CHECK(denied->status == 403);
  CHECK(denied->body.find("UNAUTHORIZED_SCOPE") != std::string::npos);

  // EBA: supranational reports yes, granular records never.
  auto supra = running.get("/reports/own_funds_mini?scope_level=SUPRANATIONAL&as_of=9", "t-eba");
  REQUIRE(supra);
  CHECK(supra->status == 200);
  CHECK(supra->body.find("\"tier1_total\":\"400\"") != std::string::npos);
  auto eba_records = running.get("/records?scope_level=SUPRANATIONAL&as_of=9", "t-eba");
  REQUIRE(eba_records);
  CHECK(eba_records->status == 403);

  // NCA: national records in clear.
  auto nca_records = running.get("/records?scope_level=NATIONAL&scope_key=DK&as_of=9", "t-nca-dk");
  REQUIRE(nca_records);
  CHECK(nca_records->status == 200);
  CHECK(nca_records->body.find("5299DKBANKA000000001") != std::string::npos);
  CHECK(nca_records->body.find("5299DEBANKC000000003") == std::string::npos);

  auto missing = running.get("/reports/no_such_template?scope_level=SUPRANATIONAL", "t-eba");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  auto beyond = running.get("/reports/own_funds_mini?scope_level=SUPRANATIONAL&as_of=99", "t-eba");
  REQUIRE(beyond);
  CHECK(beyond->status == 422);

  // LATEST resolves to the head height and is echoed numerically.
  auto latest =
      running.get("/reports/own_funds_mini?scope_level=SUPRANATIONAL&as_of=LATEST", "t-eba");
  REQUIRE(latest);
  CHECK(latest->status == 200);
  CHECK(latest->body.find("\"as_of_height\":9") != std::string::npos);
  auto latest_records =
      running.get("/records?scope_level=NATIONAL&scope_key=DK", "t-nca-dk");
  REQUIRE(latest_records);
  CHECK(latest_records->status == 200);
  CHECK(latest_records->body.find("\"as_of_height\":9") != std::string::npos);
}

TEST_CASE("every request leaves exactly one audit entry; /audit is operator-only") {
  auto reg = four_banks();
  RunningService running(reg);

  auto audit_denied = running.get("/audit", "t-eba");
  REQUIRE(audit_denied);
  CHECK(audit_denied->status == 401);

  running.get("/head", "t-bank-a");
  running.get("/head", "t-nope");
  running.get("/reports/own_funds_mini?scope_level=NATIONAL&scope_key=DK&as_of=9", "t-bank-a");
  // 4 requests so far (including the denied /audit probe).
  CHECK(running.service.audit().size() == 4);

  auto audit_ok = running.get("/audit", "t-op");
  REQUIRE(audit_ok);
  CHECK(audit_ok->status == 200);
  CHECK(audit_ok->body.find("\"outcome\":\"DENIED\"") != std::string::npos);
  CHECK(audit_ok->body.find("\"role_id\":\"bank-a\"") != std::string::npos);
  CHECK(running.service.audit().size() == 5);

  auto entries = running.service.audit().snapshot();
  REQUIRE(entries.size() == 5);
  for (std::size_t i = 0; i < entries.size(); ++i) CHECK(entries[i].sequence == i);
}

TEST_CASE("the same pull transcript replays byte-identically on a fresh service") {
  auto reg = four_banks();
  const std::vector<std::pair<std::string, std::string>> transcript = {
      {"/head", "t-bank-a"},
      {"/reports/own_funds_mini?scope_level=LOCAL&scope_key=5299DKBANKA000000001&as_of=9",
       "t-bank-a"},
      {"/reports/own_funds_mini?scope_level=NATIONAL&scope_key=DK&as_of=9", "t-nca-dk"},
      {"/reports/liquidity_mini?scope_level=SUPRANATIONAL&as_of=9", "t-eba"},
      {"/records?scope_level=NATIONAL&scope_key=DK&as_of=5", "t-nca-dk"},
  };

  auto run = [&] {
    RunningService running(reg);
    std::vector<std::pair<int, std::string>> responses;
    for (const auto& [path, token] : transcript) {
      auto res = running.get(path, token);
      REQUIRE(res);
      responses.emplace_back(res->status, res->body);
    }
    return responses;
  };
  CHECK(run() == run());
}
