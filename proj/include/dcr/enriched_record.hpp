#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dcr/ledger.hpp"
#include "dcr/mrer/execute.hpp"
#include "dcr/rational.hpp"
#include "dcr/registry.hpp"

namespace dcr {

inline constexpr const char* kExternalCounterparty = "EXTERNAL";

// An on-chain event joined with reference data as of the event height; the
// warehouse's atomic fact. At least one side resolved to a registered,
// opted-in institution.
struct EnrichedRecord {
  std::int64_t height = 0;
  int index_in_block = 0;
  std::string tx_id;
  ledger::TxKind kind = ledger::TxKind::transfer;
  std::string asset_id;
  std::int64_t amount = 0;
  std::optional<std::string> from_lei;
  std::optional<std::string> to_lei;
  registry::ExposureClass exposure_class = registry::ExposureClass::other;
  Rational risk_weight;
  registry::HqlaLevel hqla_level = registry::HqlaLevel::none;
  Rational inflow_factor;
  Rational outflow_factor;
  std::optional<std::string> jurisdiction_from;
  std::optional<std::string> jurisdiction_to;
  std::optional<std::string> contract_tag;

  ledger::Cursor position() const { return {height, index_in_block}; }

  // Ownership partitions the warehouse into LOCAL scopes: the receiving
  // institution owns the record, the paying one for REDEEM.
  const std::string& owner_lei() const { return to_lei ? *to_lei : *from_lei; }
  std::string owner_jurisdiction() const {
    return to_lei ? jurisdiction_to.value_or("") : jurisdiction_from.value_or("");
  }
  // Counterparty as seen from each side (lei or EXTERNAL).
  std::string counterparty_of_from() const { return to_lei ? *to_lei : std::string(kExternalCounterparty); }
  std::string counterparty_of_to() const { return from_lei ? *from_lei : std::string(kExternalCounterparty); }
  std::string counterparty_of_owner() const {
    return to_lei ? counterparty_of_to() : counterparty_of_from();
  }
  std::string direction() const { return to_lei ? "IN" : "OUT"; }

  mrer::RecordRow to_row() const;
};

std::string record_to_json_line(const EnrichedRecord& record);
EnrichedRecord record_from_json_line(const std::string& line);

}  // namespace dcr
