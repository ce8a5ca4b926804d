#include "dcr/roles.hpp"

#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "dcr/errors.hpp"

namespace dcr {

using ordered_json = nlohmann::ordered_json;

std::string to_string(RoleKind kind) {
  switch (kind) {
    case RoleKind::bank: return "BANK";
    case RoleKind::nca: return "NCA";
    case RoleKind::ncb: return "NCB";
    case RoleKind::nra: return "NRA";
    case RoleKind::eba: return "EBA";
    case RoleKind::ecb: return "ECB";
    case RoleKind::srb: return "SRB";
  }
  return "?";
}

RoleKind role_kind_from_string(const std::string& text) {
  if (text == "BANK") return RoleKind::bank;
  if (text == "NCA") return RoleKind::nca;
  if (text == "NCB") return RoleKind::ncb;
  if (text == "NRA") return RoleKind::nra;
  if (text == "EBA") return RoleKind::eba;
  if (text == "ECB") return RoleKind::ecb;
  if (text == "SRB") return RoleKind::srb;
  throw error(errc::file_format, "unknown role kind: " + text);
}

std::string to_string(Clearance clearance) {
  switch (clearance) {
    case Clearance::granular_own: return "GRANULAR_OWN";
    case Clearance::granular_jurisdiction: return "GRANULAR_JURISDICTION";
    case Clearance::aggregate_all: return "AGGREGATE_ALL";
    case Clearance::granular_all: return "GRANULAR_ALL";
  }
  return "?";
}

std::string to_string(Endpoint endpoint) {
  switch (endpoint) {
    case Endpoint::head: return "head";
    case Endpoint::reports: return "reports";
    case Endpoint::records: return "records";
    case Endpoint::audit: return "audit";
  }
  return "?";
}

Endpoint endpoint_from_string(const std::string& text) {
  if (text == "head") return Endpoint::head;
  if (text == "reports") return Endpoint::reports;
  if (text == "records") return Endpoint::records;
  if (text == "audit") return Endpoint::audit;
  throw error(errc::file_format, "unknown endpoint: " + text);
}

Clearance default_clearance(RoleKind kind) {
  switch (kind) {
    case RoleKind::bank: return Clearance::granular_own;
    case RoleKind::nca:
    case RoleKind::ncb:
    case RoleKind::nra: return Clearance::granular_jurisdiction;
    case RoleKind::eba:
    case RoleKind::ecb:
    case RoleKind::srb: return Clearance::aggregate_all;
  }
  return Clearance::aggregate_all;
}

bool Role::lei_in_clearance(const std::string& lei_value, const registry::Registry& reg) const {
  switch (clearance) {
    case Clearance::granular_own:
      return lei && *lei == lei_value;
    case Clearance::granular_jurisdiction: {
      const auto* record = reg.find_institution(lei_value);
      return record && jurisdiction && record->jurisdiction == *jurisdiction;
    }
    case Clearance::granular_all:
      return true;
    case Clearance::aggregate_all:
      return false;
  }
  return false;
}

std::string to_string(Relation relation) {
  switch (relation) {
    case Relation::own: return "OWN";
    case Relation::same_jurisdiction: return "SAME_JURISDICTION";
    case Relation::any: return "ANY";
  }
  return "?";
}

Relation relation_from_string(const std::string& text) {
  if (text == "OWN") return Relation::own;
  if (text == "SAME_JURISDICTION") return Relation::same_jurisdiction;
  if (text == "ANY") return Relation::any;
  throw error(errc::file_format, "unknown relation: " + text);
}

namespace {

bool relation_matches(Relation wanted, const Role& role, const Scope& scope,
                      const registry::Registry& reg) {
  if (wanted == Relation::any) return true;
  switch (scope.level) {
    case Scope::Level::local: {
      if (wanted == Relation::own) return role.lei && *role.lei == scope.key;
      const auto* record = reg.find_institution(scope.key);
      return record && role.jurisdiction && record->jurisdiction == *role.jurisdiction;
    }
    case Scope::Level::national:
      if (wanted == Relation::own) return false;
      return role.jurisdiction && *role.jurisdiction == scope.key;
    case Scope::Level::supranational:
      return false;  // only ANY rules reach the union scope
  }
  return false;
}

}  // namespace

bool Policy::allows(const Role& role, Endpoint endpoint, const Scope& scope,
                    const registry::Registry& reg) const {
  for (const auto& rule : rules_) {
    if (rule.kind != role.kind || rule.endpoint != endpoint) continue;
    if (rule.level && *rule.level != scope.level) continue;
    if (!relation_matches(rule.relation, role, scope, reg)) continue;
    return true;
  }
  return false;
}

Policy Policy::defaults() {
  Policy policy;
  auto add = [&](RoleKind kind, Endpoint endpoint, std::optional<Scope::Level> level,
                 Relation relation) {
    policy.rules_.push_back(PolicyRule{kind, endpoint, level, relation});
  };
  for (RoleKind kind : {RoleKind::bank, RoleKind::nca, RoleKind::ncb, RoleKind::nra,
                        RoleKind::eba, RoleKind::ecb, RoleKind::srb})
    add(kind, Endpoint::head, std::nullopt, Relation::any);

  add(RoleKind::bank, Endpoint::reports, Scope::Level::local, Relation::own);
  add(RoleKind::bank, Endpoint::records, Scope::Level::local, Relation::own);

  for (RoleKind kind : {RoleKind::nca, RoleKind::ncb, RoleKind::nra}) {
    add(kind, Endpoint::reports, Scope::Level::local, Relation::same_jurisdiction);
    add(kind, Endpoint::reports, Scope::Level::national, Relation::same_jurisdiction);
    add(kind, Endpoint::records, Scope::Level::local, Relation::same_jurisdiction);
    add(kind, Endpoint::records, Scope::Level::national, Relation::same_jurisdiction);
  }

  // Supranational roles see aggregates only, never record-level data and never
  // a single institution's report.
  for (RoleKind kind : {RoleKind::eba, RoleKind::ecb, RoleKind::srb}) {
    add(kind, Endpoint::reports, Scope::Level::national, Relation::any);
    add(kind, Endpoint::reports, Scope::Level::supranational, Relation::any);
  }
  // /audit is operator-only and intentionally absent from every role's rules.
  return policy;
}

void Policy::save(std::ostream& out) const {
  ordered_json doc;
  doc["rules"] = ordered_json::array();
  for (const auto& rule : rules_) {
    doc["rules"].push_back(
        {{"kind", to_string(rule.kind)},
         {"endpoint", to_string(rule.endpoint)},
         {"level", rule.level ? ordered_json(to_string(*rule.level)) : ordered_json(nullptr)},
         {"relation", to_string(rule.relation)}});
  }
  out << doc.dump(2) << '\n';
}

Policy Policy::load(std::istream& in) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
    Policy policy;
    for (const auto& j : doc.at("rules")) {
      PolicyRule rule;
      rule.kind = role_kind_from_string(j.at("kind").get<std::string>());
      rule.endpoint = endpoint_from_string(j.at("endpoint").get<std::string>());
      if (!j.at("level").is_null())
        rule.level = scope_level_from_string(j.at("level").get<std::string>());
      rule.relation = relation_from_string(j.at("relation").get<std::string>());
      policy.rules_.push_back(rule);
    }
    return policy;
  } catch (const ordered_json::exception& e) {
    throw error(errc::file_format, std::string("policy: ") + e.what());
  }
}

}  // namespace dcr
