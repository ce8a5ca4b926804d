#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dcr/mrer/expr.hpp"

namespace dcr::mrer {

enum class Source { records, figures, derived };
enum class Agg { sum, count, max, min, latest };
enum class Severity { error, warning };

std::string to_string(Source s);
std::string to_string(Agg a);
std::string to_string(Severity s);

struct DataPointDef {
  std::string id;
  Source source = Source::records;
  ExprPtr measure;            // RECORDS / FIGURES
  ExprPtr filter;             // RECORDS only, optional
  std::optional<Agg> agg;     // non-DERIVED
  ExprPtr derive;             // DERIVED only; references prior ids

  bool additive() const { return agg == Agg::sum || agg == Agg::count; }
};

struct ValidationRule {
  std::string rule_id;
  ExprPtr expr;  // boolean over data-point ids
  Severity severity = Severity::error;
};

struct ReportTemplate {
  std::string template_id;
  std::string version;
  std::int64_t frequency_blocks = 30;
  std::vector<DataPointDef> data_points;
  std::vector<ValidationRule> validations;
  nlohmann::ordered_json annotations;  // free-form metadata
};

// Full structural and type validation; throws error with codes SYNTAX_ERROR,
// UNKNOWN_FIELD, TYPE_MISMATCH, FORWARD_REFERENCE, DUPLICATE_ID.
ReportTemplate parse_template(const std::string& text);

std::string serialize_template(const ReportTemplate& tmpl);

bool template_equal(const ReportTemplate& a, const ReportTemplate& b);

// Field tables the type checker validates RECORDS / FIGURES measures against.
std::optional<ValueType> record_field_type(const std::string& name);
std::optional<ValueType> figures_field_type(const std::string& name);

}  // namespace dcr::mrer
