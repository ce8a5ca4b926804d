#include "dcr/registry.hpp"

#include <algorithm>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>

#include "dcr/errors.hpp"

namespace dcr::registry {

using ordered_json = nlohmann::ordered_json;

std::string to_string(ExposureClass c) {
  switch (c) {
    case ExposureClass::sovereign: return "SOVEREIGN";
    case ExposureClass::institution: return "INSTITUTION";
    case ExposureClass::corporate: return "CORPORATE";
    case ExposureClass::retail: return "RETAIL";
    case ExposureClass::other: return "OTHER";
  }
  return "?";
}

std::string to_string(HqlaLevel l) {
  switch (l) {
    case HqlaLevel::l1: return "L1";
    case HqlaLevel::l2a: return "L2A";
    case HqlaLevel::l2b: return "L2B";
    case HqlaLevel::none: return "NONE";
  }
  return "?";
}

ExposureClass exposure_class_from_string(const std::string& text) {
  if (text == "SOVEREIGN") return ExposureClass::sovereign;
  if (text == "INSTITUTION") return ExposureClass::institution;
  if (text == "CORPORATE") return ExposureClass::corporate;
  if (text == "RETAIL") return ExposureClass::retail;
  if (text == "OTHER") return ExposureClass::other;
  throw error(errc::file_format, "unknown exposure class: " + text);
}

HqlaLevel hqla_level_from_string(const std::string& text) {
  if (text == "L1") return HqlaLevel::l1;
  if (text == "L2A") return HqlaLevel::l2a;
  if (text == "L2B") return HqlaLevel::l2b;
  if (text == "NONE") return HqlaLevel::none;
  throw error(errc::file_format, "unknown HQLA level: " + text);
}

bool lei_is_well_formed(const std::string& lei) {
  if (lei.size() != 20) return false;
  return std::all_of(lei.begin(), lei.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  });
}

void Registry::register_institution(InstitutionRecord record) {
  if (!lei_is_well_formed(record.lei)) throw error(errc::malformed_lei, record.lei);
  if (institutions_.count(record.lei)) throw error(errc::duplicate_lei, record.lei);
  if (record.opt_in_height < 0)
    throw error(errc::file_format, record.lei + ": negative opt_in_height");
  std::int64_t prev = -1;
  for (const auto& figures : record.capital_figures) {
    if (figures.effective_height <= prev)
      throw error(errc::file_format, record.lei + ": figures effective heights must strictly increase");
    if (figures.tier1 < 0 || figures.cet1 < 0 || figures.hqla < 0 || figures.cet1 > figures.tier1)
      throw error(errc::file_format, record.lei + ": invalid capital figures");
    prev = figures.effective_height;
  }
  institutions_.emplace(record.lei, std::move(record));
}

namespace {

bool ranges_overlap(const AddressBinding& a, const AddressBinding& b) {
  auto end = [](const AddressBinding& x) {
    return x.revoked_height.value_or(std::numeric_limits<std::int64_t>::max());
  };
  return a.effective_height <= end(b) && b.effective_height <= end(a);
}

}  // namespace

void Registry::bind_address(AddressBinding binding) {
  if (binding.address.empty()) throw error(errc::file_format, "empty address");
  if (!institutions_.count(binding.lei)) throw error(errc::unknown_lei, binding.lei);
  if (binding.revoked_height && *binding.revoked_height < binding.effective_height)
    throw error(errc::file_format, binding.address + ": revoked before effective");
  for (const auto& existing : bindings_) {
    if (existing.address == binding.address && ranges_overlap(existing, binding))
      throw error(errc::address_already_bound,
                  binding.address + " already bound to " + existing.lei + " in an overlapping range");
  }
  bindings_.push_back(std::move(binding));
}

void Registry::classify_asset(AssetClassification classification) {
  if (classification.asset_id.empty()) throw error(errc::file_format, "empty asset_id");
  if (classification.risk_weight < 0 || classification.risk_weight > Rational(25, 2))
    throw error(errc::file_format, classification.asset_id + ": risk_weight outside [0, 12.5]");
  for (const Rational* f : {&classification.outflow_factor, &classification.inflow_factor})
    if (*f < 0 || *f > 1)
      throw error(errc::file_format, classification.asset_id + ": factor outside [0, 1]");
  assets_[classification.asset_id] = std::move(classification);
}

std::optional<std::string> Registry::lookup_address(const std::string& address,
                                                    std::int64_t height) const {
  for (const auto& binding : bindings_) {
    if (binding.address != address) continue;
    if (height < binding.effective_height) continue;
    if (binding.revoked_height && height > *binding.revoked_height) continue;
    return binding.lei;
  }
  return std::nullopt;
}

CapitalFigures Registry::figures_at(const std::string& lei, std::int64_t height) const {
  auto it = institutions_.find(lei);
  if (it == institutions_.end()) throw error(errc::unknown_lei, lei);
  const CapitalFigures* best = nullptr;
  for (const auto& figures : it->second.capital_figures)
    if (figures.effective_height <= height) best = &figures;
  if (!best) throw error(errc::no_figures_effective, lei + " at height " + std::to_string(height));
  return *best;
}

const InstitutionRecord* Registry::find_institution(const std::string& lei) const {
  auto it = institutions_.find(lei);
  return it == institutions_.end() ? nullptr : &it->second;
}

std::optional<AssetClassification> Registry::classification(const std::string& asset_id) const {
  auto it = assets_.find(asset_id);
  if (it == assets_.end()) return std::nullopt;
  return it->second;
}

std::vector<const InstitutionRecord*> Registry::institutions() const {
  std::vector<const InstitutionRecord*> out;
  out.reserve(institutions_.size());
  for (const auto& [lei, record] : institutions_) out.push_back(&record);
  return out;  // std::map iteration is already lei-sorted
}

std::vector<std::string> Registry::jurisdictions() const {
  std::set<std::string> unique;
  for (const auto& [lei, record] : institutions_) unique.insert(record.jurisdiction);
  return {unique.begin(), unique.end()};
}

void Registry::save(std::ostream& out) const {
  ordered_json doc;
  doc["institutions"] = ordered_json::array();
  for (const auto& [lei, record] : institutions_) {
    ordered_json j;
    j["lei"] = record.lei;
    j["name"] = record.name;
    j["jurisdiction"] = record.jurisdiction;
    j["authority_id"] = record.authority_id;
    j["opt_in_height"] = record.opt_in_height;
    j["capital_figures"] = ordered_json::array();
    for (const auto& figures : record.capital_figures) {
      j["capital_figures"].push_back({{"effective_height", figures.effective_height},
                                      {"tier1", figures.tier1},
                                      {"cet1", figures.cet1},
                                      {"hqla", figures.hqla}});
    }
    doc["institutions"].push_back(std::move(j));
  }
  doc["bindings"] = ordered_json::array();
  for (const auto& binding : bindings_) {
    doc["bindings"].push_back(
        {{"address", binding.address},
         {"lei", binding.lei},
         {"effective_height", binding.effective_height},
         {"revoked_height",
          binding.revoked_height ? ordered_json(*binding.revoked_height) : ordered_json(nullptr)}});
  }
  doc["assets"] = ordered_json::array();
  for (const auto& [id, asset] : assets_) {
    doc["assets"].push_back({{"asset_id", asset.asset_id},
                             {"exposure_class", to_string(asset.exposure_class)},
                             {"risk_weight", render_decimal(asset.risk_weight)},
                             {"hqla_level", to_string(asset.hqla_level)},
                             {"outflow_factor", render_decimal(asset.outflow_factor)},
                             {"inflow_factor", render_decimal(asset.inflow_factor)}});
  }
  out << doc.dump(2) << '\n';
}

Registry Registry::load(std::istream& in) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw error(errc::file_format, std::string("registry: ") + e.what());
  }
  Registry registry;
  try {
    for (const auto& j : doc.at("institutions")) {
      InstitutionRecord record;
      record.lei = j.at("lei").get<std::string>();
      record.name = j.at("name").get<std::string>();
      record.jurisdiction = j.at("jurisdiction").get<std::string>();
      record.authority_id = j.at("authority_id").get<std::string>();
      record.opt_in_height = j.at("opt_in_height").get<std::int64_t>();
      for (const auto& f : j.at("capital_figures")) {
        record.capital_figures.push_back(CapitalFigures{
            f.at("tier1").get<std::int64_t>(), f.at("cet1").get<std::int64_t>(),
            f.at("hqla").get<std::int64_t>(), f.at("effective_height").get<std::int64_t>()});
      }
      registry.register_institution(std::move(record));
    }
    for (const auto& j : doc.at("bindings")) {
      AddressBinding binding;
      binding.address = j.at("address").get<std::string>();
      binding.lei = j.at("lei").get<std::string>();
      binding.effective_height = j.at("effective_height").get<std::int64_t>();
      if (!j.at("revoked_height").is_null())
        binding.revoked_height = j.at("revoked_height").get<std::int64_t>();
      registry.bind_address(std::move(binding));
    }
    for (const auto& j : doc.at("assets")) {
      AssetClassification asset;
      asset.asset_id = j.at("asset_id").get<std::string>();
      asset.exposure_class = exposure_class_from_string(j.at("exposure_class").get<std::string>());
      asset.risk_weight = parse_decimal(j.at("risk_weight").get<std::string>());
      asset.hqla_level = hqla_level_from_string(j.at("hqla_level").get<std::string>());
      asset.outflow_factor = parse_decimal(j.at("outflow_factor").get<std::string>());
      asset.inflow_factor = parse_decimal(j.at("inflow_factor").get<std::string>());
      registry.classify_asset(std::move(asset));
    }
  } catch (const ordered_json::exception& e) {
    throw error(errc::file_format, std::string("registry: ") + e.what());
  }
  return registry;
}

}  // namespace dcr::registry
