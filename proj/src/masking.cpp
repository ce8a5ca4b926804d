#include "dcr/masking.hpp"

#include <openssl/hmac.h>

#include <array>
#include <nlohmann/json.hpp>

#include "dcr/errors.hpp"

namespace dcr {

using ordered_json = nlohmann::ordered_json;

std::string pseudonymize(const std::string& key, const std::string& lei) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
       reinterpret_cast<const unsigned char*>(lei.data()), lei.size(), digest.data(), &length);
  static const char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(16);
  for (int i = 0; i < 8; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0x0f];
  }
  return out;
}

std::int64_t truncate_amount(std::int64_t amount, std::int64_t bucket) {
  if (bucket <= 0) throw error(errc::file_format, "amount_bucket must be positive");
  return (amount / bucket) * bucket;  // amounts are never negative on the ledger
}

std::string MaskedRecord::to_json_line() const {
  ordered_json j;
  j["height"] = height;
  j["index_in_block"] = index_in_block;
  j["tx_id"] = tx_id;
  j["kind"] = kind;
  j["asset_id"] = asset_id;
  j["amount"] = amount;
  j["from_party"] = from_party;
  j["to_party"] = to_party;
  j["exposure_class"] = exposure_class;
  j["risk_weight"] = risk_weight;
  j["hqla_level"] = hqla_level;
  j["jurisdiction_from"] = jurisdiction_from;
  j["jurisdiction_to"] = jurisdiction_to;
  j["contract_tag"] = contract_tag;
  return j.dump();
}

MaskedRecord mask(const EnrichedRecord& record, const Role& role, const MaskingPolicy& policy,
                  const registry::Registry& reg) {
  MaskedRecord out;
  out.height = record.height;
  out.index_in_block = record.index_in_block;
  out.tx_id = record.tx_id;
  out.kind = ledger::to_string(record.kind);
  out.asset_id = record.asset_id;
  out.exposure_class = registry::to_string(record.exposure_class);
  out.risk_weight = render_decimal(record.risk_weight);
  out.hqla_level = registry::to_string(record.hqla_level);
  out.jurisdiction_from = record.jurisdiction_from.value_or("");
  out.jurisdiction_to = record.jurisdiction_to.value_or("");
  out.contract_tag = record.contract_tag.value_or("");

  bool masked_any = false;
  auto render_side = [&](const std::optional<std::string>& lei) -> std::string {
    if (!lei) return kExternalCounterparty;
    if (role.lei_in_clearance(*lei, reg)) return *lei;
    masked_any = true;
    return pseudonymize(policy.pseudonym_key, *lei);
  };
  out.from_party = render_side(record.from_lei);
  out.to_party = render_side(record.to_lei);
  out.amount = masked_any ? truncate_amount(record.amount, policy.amount_bucket) : record.amount;
  return out;
}

}  // namespace dcr
