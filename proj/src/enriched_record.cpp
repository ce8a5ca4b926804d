#include "dcr/enriched_record.hpp"

#include <nlohmann/json.hpp>

#include "dcr/errors.hpp"

namespace dcr {

using ordered_json = nlohmann::ordered_json;

mrer::RecordRow EnrichedRecord::to_row() const {
  mrer::RecordRow row;
  row.height = height;
  row.index_in_block = index_in_block;
  row.tx_id = tx_id;
  row.amount = Rational(amount);
  row.risk_weight = risk_weight;
  row.inflow_factor = inflow_factor;
  row.outflow_factor = outflow_factor;
  row.kind = ledger::to_string(kind);
  row.asset_id = asset_id;
  row.exposure_class = registry::to_string(exposure_class);
  row.hqla_level = registry::to_string(hqla_level);
  row.lei = owner_lei();
  row.counterparty = counterparty_of_owner();
  row.jurisdiction = owner_jurisdiction();
  row.direction = direction();
  row.contract_tag = contract_tag.value_or("");
  return row;
}

namespace {

ordered_json opt(const std::optional<std::string>& value) {
  return value ? ordered_json(*value) : ordered_json(nullptr);
}

std::optional<std::string> opt_from(const ordered_json& j, const char* key) {
  if (j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

}  // namespace

std::string record_to_json_line(const EnrichedRecord& record) {
  ordered_json j;
  j["height"] = record.height;
  j["index_in_block"] = record.index_in_block;
  j["tx_id"] = record.tx_id;
  j["kind"] = ledger::to_string(record.kind);
  j["asset_id"] = record.asset_id;
  j["amount"] = record.amount;
  j["from_lei"] = opt(record.from_lei);
  j["to_lei"] = opt(record.to_lei);
  j["counterparty_from"] = record.counterparty_of_from();
  j["counterparty_to"] = record.counterparty_of_to();
  j["exposure_class"] = registry::to_string(record.exposure_class);
  j["risk_weight"] = render_decimal(record.risk_weight);
  j["hqla_level"] = registry::to_string(record.hqla_level);
  j["inflow_factor"] = render_decimal(record.inflow_factor);
  j["outflow_factor"] = render_decimal(record.outflow_factor);
  j["jurisdiction_from"] = opt(record.jurisdiction_from);
  j["jurisdiction_to"] = opt(record.jurisdiction_to);
  j["contract_tag"] = opt(record.contract_tag);
  return j.dump();
}

EnrichedRecord record_from_json_line(const std::string& line) {
  try {
    ordered_json j = ordered_json::parse(line);
    EnrichedRecord record;
    record.height = j.at("height").get<std::int64_t>();
    record.index_in_block = j.at("index_in_block").get<int>();
    record.tx_id = j.at("tx_id").get<std::string>();
    record.kind = ledger::tx_kind_from_string(j.at("kind").get<std::string>());
    record.asset_id = j.at("asset_id").get<std::string>();
    record.amount = j.at("amount").get<std::int64_t>();
    record.from_lei = opt_from(j, "from_lei");
    record.to_lei = opt_from(j, "to_lei");
    record.exposure_class =
        registry::exposure_class_from_string(j.at("exposure_class").get<std::string>());
    record.risk_weight = parse_decimal(j.at("risk_weight").get<std::string>());
    record.hqla_level = registry::hqla_level_from_string(j.at("hqla_level").get<std::string>());
    record.inflow_factor = parse_decimal(j.at("inflow_factor").get<std::string>());
    record.outflow_factor = parse_decimal(j.at("outflow_factor").get<std::string>());
    record.jurisdiction_from = opt_from(j, "jurisdiction_from");
    record.jurisdiction_to = opt_from(j, "jurisdiction_to");
    record.contract_tag = opt_from(j, "contract_tag");
    if (!record.from_lei && !record.to_lei)
      throw error(errc::file_format, record.tx_id + ": record with no resolved side");
    return record;
  } catch (const ordered_json::exception& e) {
    throw error(errc::file_format, std::string("enriched record line: ") + e.what());
  }
}

}  // namespace dcr
