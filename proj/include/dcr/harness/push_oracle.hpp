#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dcr/mrer/execute.hpp"
#include "dcr/mrer/template.hpp"
#include "dcr/scope.hpp"

namespace dcr::harness {

// The status-quo batch pipeline, implemented independently of the composer
// and warehouse: it consumes only the serialized event-log and registry
// exports, replays and joins them with flat scans, and consolidates
// bank -> national -> supranational at period end. Shares only the template
// parser and expression AST with the pull path.
class PushOracle {
 public:
  // `events` is the newline-delimited event export; `registry_doc` the
  // registry bootstrap JSON.
  PushOracle(std::istream& events, std::istream& registry_doc);

  mrer::ReportInstance report(const mrer::ReportTemplate& tmpl, const Scope& scope,
                              std::int64_t period_end_height) const;

  // Every scope at once: all banks, all jurisdictions, the union.
  std::map<Scope, mrer::ReportInstance> report_all_scopes(const mrer::ReportTemplate& tmpl,
                                                          std::int64_t period_end_height) const;

  std::vector<std::string> bank_leis() const;
  std::vector<std::string> jurisdictions() const;

 private:
  struct Event {
    std::int64_t height = 0;
    int index_in_block = 0;
    std::string tx_id;
    std::string kind;
    std::string asset_id;
    std::string from;  // empty when absent
    std::string to;
    std::int64_t amount = 0;
    std::string contract_tag;
  };
  struct Institution {
    std::string lei;
    std::string jurisdiction;
    std::int64_t opt_in_height = 0;
    // (effective_height, tier1, cet1, hqla) in file order
    std::vector<std::array<std::int64_t, 4>> figures;
  };
  struct Binding {
    std::string address;
    std::string lei;
    std::int64_t effective_height = 0;
    std::int64_t revoked_height = -1;  // -1: never revoked
  };
  struct Asset {
    std::string asset_id;
    std::string exposure_class;
    Rational risk_weight;
    std::string hqla_level;
    Rational outflow_factor;
    Rational inflow_factor;
  };

  std::string resolve(const std::string& address, std::int64_t height) const;
  std::vector<mrer::RecordRow> rows_for(const Scope& scope, std::int64_t height) const;
  std::vector<mrer::FiguresRow> figures_for(const Scope& scope, std::int64_t height) const;

  std::vector<Event> events_;
  std::vector<Institution> institutions_;
  std::vector<Binding> bindings_;
  std::vector<Asset> assets_;
};

}  // namespace dcr::harness
