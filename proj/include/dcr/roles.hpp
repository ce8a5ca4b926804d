#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dcr/registry.hpp"
#include "dcr/scope.hpp"

namespace dcr {

enum class RoleKind { bank, nca, ncb, nra, eba, ecb, srb };
enum class Clearance { granular_own, granular_jurisdiction, aggregate_all, granular_all };
enum class Endpoint { head, reports, records, audit };

std::string to_string(RoleKind kind);
RoleKind role_kind_from_string(const std::string& text);
std::string to_string(Clearance clearance);
std::string to_string(Endpoint endpoint);
Endpoint endpoint_from_string(const std::string& text);

// Clearance follows from the role kind; GRANULAR_ALL is reserved and never
// assigned by default.
Clearance default_clearance(RoleKind kind);

struct Role {
  std::string role_id;
  RoleKind kind = RoleKind::bank;
  std::optional<std::string> jurisdiction;
  std::optional<std::string> lei;  // BANK only
  Clearance clearance = Clearance::aggregate_all;

  // True when `lei` falls inside this role's granular clearance.
  bool lei_in_clearance(const std::string& lei_value, const registry::Registry& reg) const;
};

// Relation of a role to a requested scope, used as the policy-rule match key.
enum class Relation { own, same_jurisdiction, any };

std::string to_string(Relation relation);
Relation relation_from_string(const std::string& text);

struct PolicyRule {
  RoleKind kind = RoleKind::bank;
  Endpoint endpoint = Endpoint::head;
  std::optional<Scope::Level> level;  // nullopt: any level
  Relation relation = Relation::any;
};

// Explicit allow-list; anything not matched is denied.
class Policy {
 public:
  bool allows(const Role& role, Endpoint endpoint, const Scope& scope,
              const registry::Registry& reg) const;

  static Policy defaults();
  static Policy load(std::istream& in);
  void save(std::ostream& out) const;

 private:
  std::vector<PolicyRule> rules_;
};

}  // namespace dcr
