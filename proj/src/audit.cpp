#include "dcr/audit.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace dcr {

namespace {

std::string now_utc() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

}  // namespace

AuditEntry AuditLog::append(std::string role_id, std::string query, std::string outcome) {
  std::lock_guard lock(mutex_);
  AuditEntry entry{entries_.size(), now_utc(), std::move(role_id), std::move(query),
                   std::move(outcome)};
  entries_.push_back(entry);
  return entry;
}

std::vector<AuditEntry> AuditLog::snapshot() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

std::size_t AuditLog::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace dcr
