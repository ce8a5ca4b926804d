#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dcr/mrer/template.hpp"
#include "dcr/scope.hpp"

namespace dcr::mrer {

// One warehouse fact as seen by template expressions, from the perspective of
// the institution that owns the record.
struct RecordRow {
  std::int64_t height = 0;
  int index_in_block = 0;
  std::string tx_id;
  Rational amount;
  Rational risk_weight;
  Rational inflow_factor;
  Rational outflow_factor;
  std::string kind;
  std::string asset_id;
  std::string exposure_class;
  std::string hqla_level;
  std::string lei;           // owning institution
  std::string counterparty;  // other side's lei or "EXTERNAL"
  std::string jurisdiction;  // owning institution's jurisdiction
  std::string direction;     // "IN" / "OUT"
  std::string contract_tag;  // empty when absent
};

// One capital-figures row per in-scope institution, effective at the as-of
// height.
struct FiguresRow {
  std::string lei;
  Rational tier1;
  Rational cet1;
  Rational hqla;
  Rational effective_height;
};

struct ValidationResult {
  std::string rule_id;
  bool passed = false;
  Severity severity = Severity::warning;
};

struct ReportInstance {
  std::string template_id;
  std::string version;
  Scope scope;
  std::int64_t as_of_height = -1;
  std::vector<std::pair<std::string, Rational>> values;  // template order
  std::vector<ValidationResult> validation_results;

  const Rational& value(const std::string& id) const;
  bool submittable() const;  // no ERROR-severity failures
};

// Executes a template over immutable, height-bounded views. Total: division
// by zero in a derivation yields 0 plus an automatic WARNING entry.
ReportInstance execute(const ReportTemplate& tmpl, std::span<const RecordRow> records,
                       std::span<const FiguresRow> figures, Scope scope,
                       std::int64_t as_of_height);

// Composes child instances one level up: SUM/COUNT add, MAX/MIN fold, LATEST
// is recomputed over the scope's own views, DERIVED is re-evaluated from the
// composed values. Validations are re-evaluated at the composed scope.
ReportInstance compose(const ReportTemplate& tmpl, std::span<const ReportInstance> children,
                       std::span<const RecordRow> scope_records,
                       std::span<const FiguresRow> scope_figures, Scope scope,
                       std::int64_t as_of_height);

// Re-evaluates the template's validation rules against an instance's values.
std::vector<ValidationResult> validate(const ReportTemplate& tmpl, const ReportInstance& instance);

// Stable key order, decimal rendering round-half-even at 10 places.
std::string serialize_instance(const ReportInstance& instance);

Value record_field(const RecordRow& row, const std::string& name);
Value figures_field(const FiguresRow& row, const std::string& name);

}  // namespace dcr::mrer
