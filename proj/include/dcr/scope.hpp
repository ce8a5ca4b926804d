#pragma once

#include <compare>
#include <string>

namespace dcr {

// Reporting scope: one institution, one jurisdiction, or the whole union.
struct Scope {
  enum class Level { local, national, supranational };

  Level level = Level::supranational;
  std::string key;  // lei for LOCAL, jurisdiction for NATIONAL, empty otherwise

  static Scope local(std::string lei) { return {Level::local, std::move(lei)}; }
  static Scope national(std::string jurisdiction) { return {Level::national, std::move(jurisdiction)}; }
  static Scope supranational() { return {Level::supranational, {}}; }

  auto operator<=>(const Scope&) const = default;
};

std::string to_string(Scope::Level level);
Scope::Level scope_level_from_string(const std::string& text);
std::string to_string(const Scope& scope);

}  // namespace dcr
