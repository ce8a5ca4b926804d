#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dcr/rational.hpp"

namespace dcr::registry {

struct CapitalFigures {
  std::int64_t tier1 = 0;  // minor units
  std::int64_t cet1 = 0;   // cet1 <= tier1
  std::int64_t hqla = 0;
  std::int64_t effective_height = 0;
};

struct InstitutionRecord {
  std::string lei;  // 20 chars, [A-Z0-9]
  std::string name;
  std::string jurisdiction;
  std::string authority_id;
  std::int64_t opt_in_height = 0;
  std::vector<CapitalFigures> capital_figures;  // effective heights strictly increasing
};

struct AddressBinding {
  std::string address;
  std::string lei;
  std::int64_t effective_height = 0;
  std::optional<std::int64_t> revoked_height;  // inclusive last covered height
};

enum class ExposureClass { sovereign, institution, corporate, retail, other };
enum class HqlaLevel { l1, l2a, l2b, none };

std::string to_string(ExposureClass c);
std::string to_string(HqlaLevel l);
ExposureClass exposure_class_from_string(const std::string& text);
HqlaLevel hqla_level_from_string(const std::string& text);

struct AssetClassification {
  std::string asset_id;
  ExposureClass exposure_class = ExposureClass::other;
  Rational risk_weight = 1;          // [0, 12.5]
  HqlaLevel hqla_level = HqlaLevel::none;
  Rational outflow_factor = 1;       // [0, 1]
  Rational inflow_factor = 1;        // [0, 1]
};

bool lei_is_well_formed(const std::string& lei);

// The reference-data registry used for enrichment. Height-effective and
// append-only: bindings and figures are never destroyed retroactively, so
// lookups at a past height always replay identically.
class Registry {
 public:
  void register_institution(InstitutionRecord record);
  void bind_address(AddressBinding binding);
  void classify_asset(AssetClassification classification);

  // lei covering `height`, or nullopt for unbound / not yet effective / revoked.
  std::optional<std::string> lookup_address(const std::string& address,
                                            std::int64_t height) const;

  // Figures with the greatest effective_height <= height.
  CapitalFigures figures_at(const std::string& lei, std::int64_t height) const;

  const InstitutionRecord* find_institution(const std::string& lei) const;
  std::optional<AssetClassification> classification(const std::string& asset_id) const;

  // Sorted by lei.
  std::vector<const InstitutionRecord*> institutions() const;
  // Sorted, deduplicated jurisdictions of all registered institutions.
  std::vector<std::string> jurisdictions() const;
  const std::vector<AddressBinding>& bindings() const { return bindings_; }

  void save(std::ostream& out) const;
  static Registry load(std::istream& in);

 private:
  std::map<std::string, InstitutionRecord> institutions_;
  std::vector<AddressBinding> bindings_;
  std::map<std::string, AssetClassification> assets_;
};

}  // namespace dcr::registry
