#include "dcr/scope.hpp"

#include "dcr/errors.hpp"

namespace dcr {

std::string to_string(Scope::Level level) {
  switch (level) {
    case Scope::Level::local: return "LOCAL";
    case Scope::Level::national: return "NATIONAL";
    case Scope::Level::supranational: return "SUPRANATIONAL";
  }
  return "?";
}

Scope::Level scope_level_from_string(const std::string& text) {
  if (text == "LOCAL") return Scope::Level::local;
  if (text == "NATIONAL") return Scope::Level::national;
  if (text == "SUPRANATIONAL") return Scope::Level::supranational;
  throw error(errc::file_format, "unknown scope level: " + text);
}

std::string to_string(const Scope& scope) {
  std::string out = to_string(scope.level);
  if (!scope.key.empty()) out += ":" + scope.key;
  return out;
}

}  // namespace dcr
