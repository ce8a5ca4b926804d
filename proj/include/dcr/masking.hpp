#pragma once

#include <cstdint>
#include <string>

#include "dcr/enriched_record.hpp"
#include "dcr/roles.hpp"

namespace dcr {

struct MaskingPolicy {
  std::string pseudonym_key;       // secret; fixed key keeps pseudonyms stable
  std::int64_t amount_bucket = 100;  // > 0
};

// Keyed pseudonym: HMAC-SHA-256(key, lei), first 8 bytes as 16 hex chars.
// Deterministic under a fixed key so analysts can correlate within a report
// without learning identity.
std::string pseudonymize(const std::string& key, const std::string& lei);

std::int64_t truncate_amount(std::int64_t amount, std::int64_t bucket);

// A record as released to a role: out-of-clearance leis replaced by
// pseudonyms; when any side is masked the amount is floor-bucketed.
struct MaskedRecord {
  std::int64_t height = 0;
  int index_in_block = 0;
  std::string tx_id;
  std::string kind;
  std::string asset_id;
  std::int64_t amount = 0;
  std::string from_party;  // lei, pseudonym, or EXTERNAL
  std::string to_party;
  std::string exposure_class;
  std::string risk_weight;
  std::string hqla_level;
  std::string jurisdiction_from;
  std::string jurisdiction_to;
  std::string contract_tag;

  std::string to_json_line() const;
};

MaskedRecord mask(const EnrichedRecord& record, const Role& role, const MaskingPolicy& policy,
                  const registry::Registry& reg);

}  // namespace dcr
