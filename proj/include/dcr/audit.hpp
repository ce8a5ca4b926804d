#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

namespace dcr {

struct AuditEntry {
  std::uint64_t sequence = 0;
  std::string wall_time;  // ISO-8601 UTC
  std::string role_id;    // empty when authentication failed
  std::string query;
  std::string outcome;    // OK / DENIED / ERROR
};

// Append-only request trail; every request produces exactly one entry.
class AuditLog {
 public:
  AuditEntry append(std::string role_id, std::string query, std::string outcome);
  std::vector<AuditEntry> snapshot() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::vector<AuditEntry> entries_;
};

}  // namespace dcr
