#pragma once

#include <cstdint>
#include <iosfwd>
#include <shared_mutex>
#include <string>
#include <vector>

#include "dcr/enriched_record.hpp"
#include "dcr/masking.hpp"
#include "dcr/mrer/execute.hpp"
#include "dcr/roles.hpp"
#include "dcr/scope.hpp"

namespace dcr {

// Append-only store of enriched records plus the composer's persisted cursor.
// Single appender, snapshot-consistent concurrent readers; no operation ever
// rewrites or deletes an appended record.
class Warehouse {
 public:
  Warehouse(const registry::Registry& reg, Policy policy, MaskingPolicy masking)
      : registry_(reg), policy_(std::move(policy)), masking_(std::move(masking)) {}

  void append(EnrichedRecord record);
  // Records plus cursor advance as one atomic step; this is the composer's
  // commit point.
  void append_batch(std::vector<EnrichedRecord> records, ledger::Cursor new_cursor);

  ledger::Cursor cursor() const;
  // The T+0 frontier: greatest height fully processed by the composer.
  std::int64_t head_height() const;
  std::size_t record_count() const;

  // Authorized, masked, snapshot view in stable (height, index) order.
  std::vector<MaskedRecord> query_records(const Scope& scope, std::int64_t as_of_height,
                                          const Role& role) const;

  // Pull-model reporting: LOCAL executes the template over the institution's
  // records, NATIONAL and SUPRANATIONAL compose child instances level by
  // level per each data point's composition rule.
  mrer::ReportInstance aggregate_report(const mrer::ReportTemplate& tmpl, const Scope& scope,
                                        std::int64_t as_of_height) const;

  // Unmasked operator views, used by exports and oracle comparison.
  std::vector<EnrichedRecord> records_up_to(std::int64_t as_of_height) const;
  void export_records(std::ostream& out) const;

  // Durable snapshot: record log plus cursor. Reloading replays exactly.
  void save(std::ostream& out) const;
  void load(std::istream& in);

  const registry::Registry& registry() const { return registry_; }
  const Policy& policy() const { return policy_; }
  const MaskingPolicy& masking_policy() const { return masking_; }

 private:
  // Institutions opted in at `height`, lei-sorted; jurisdiction filter optional.
  std::vector<const registry::InstitutionRecord*> in_scope(std::int64_t height,
                                                           const std::string& jurisdiction) const;
  mrer::ReportInstance local_report(const mrer::ReportTemplate& tmpl, const std::string& lei,
                                    std::int64_t as_of_height) const;
  std::vector<mrer::RecordRow> scope_rows(const Scope& scope, std::int64_t as_of_height) const;
  std::vector<mrer::FiguresRow> scope_figures(const Scope& scope,
                                              std::int64_t as_of_height) const;

  const registry::Registry& registry_;
  Policy policy_;
  MaskingPolicy masking_;
  std::vector<EnrichedRecord> records_;
  ledger::Cursor cursor_;
  mutable std::shared_mutex mutex_;
};

}  // namespace dcr
