#include "dcr/mrer/template.hpp"

#include <set>

#include "dcr/errors.hpp"

namespace dcr::mrer {

using ordered_json = nlohmann::ordered_json;

std::string to_string(Source s) {
  switch (s) {
    case Source::records: return "RECORDS";
    case Source::figures: return "FIGURES";
    case Source::derived: return "DERIVED";
  }
  return "?";
}

std::string to_string(Agg a) {
  switch (a) {
    case Agg::sum: return "SUM";
    case Agg::count: return "COUNT";
    case Agg::max: return "MAX";
    case Agg::min: return "MIN";
    case Agg::latest: return "LATEST";
  }
  return "?";
}

std::string to_string(Severity s) { return s == Severity::error ? "ERROR" : "WARNING"; }

namespace {

Source source_from_string(const std::string& text) {
  if (text == "RECORDS") return Source::records;
  if (text == "FIGURES") return Source::figures;
  if (text == "DERIVED") return Source::derived;
  throw error(errc::syntax_error, "unknown source: " + text);
}

Agg agg_from_string(const std::string& text) {
  if (text == "SUM") return Agg::sum;
  if (text == "COUNT") return Agg::count;
  if (text == "MAX") return Agg::max;
  if (text == "MIN") return Agg::min;
  if (text == "LATEST") return Agg::latest;
  throw error(errc::syntax_error, "unknown aggregation: " + text);
}

Severity severity_from_string(const std::string& text) {
  if (text == "ERROR") return Severity::error;
  if (text == "WARNING") return Severity::warning;
  throw error(errc::syntax_error, "unknown severity: " + text);
}

}  // namespace

std::optional<ValueType> record_field_type(const std::string& name) {
  static const std::set<std::string> numeric = {"amount", "risk_weight", "height",
                                                "index_in_block", "inflow_factor",
                                                "outflow_factor"};
  static const std::set<std::string> text = {"tx_id",         "kind",        "asset_id",
                                             "exposure_class", "hqla_level", "lei",
                                             "counterparty",   "jurisdiction", "direction",
                                             "contract_tag"};
  if (numeric.count(name)) return ValueType::number;
  if (text.count(name)) return ValueType::text;
  return std::nullopt;
}

std::optional<ValueType> figures_field_type(const std::string& name) {
  static const std::set<std::string> numeric = {"tier1", "cet1", "hqla", "effective_height"};
  if (numeric.count(name)) return ValueType::number;
  return std::nullopt;
}

ReportTemplate parse_template(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw error(errc::syntax_error, e.what());
  }
  ReportTemplate tmpl;
  try {
    if (!doc.is_object()) throw error(errc::syntax_error, "template must be a JSON object");
    tmpl.template_id = doc.at("template_id").get<std::string>();
    tmpl.version = doc.at("version").get<std::string>();
    tmpl.frequency_blocks = doc.at("frequency_blocks").get<std::int64_t>();
    if (tmpl.template_id.empty()) throw error(errc::syntax_error, "empty template_id");
    if (tmpl.frequency_blocks < 1) throw error(errc::syntax_error, "frequency_blocks must be >= 1");
    if (doc.contains("annotations")) {
      if (!doc["annotations"].is_object())
        throw error(errc::syntax_error, "annotations must be an object");
      tmpl.annotations = doc["annotations"];
    } else {
      tmpl.annotations = ordered_json::object();
    }

    std::set<std::string> all_ids;
    for (const auto& dp : doc.at("data_points")) {
      if (!dp.is_object()) throw error(errc::syntax_error, "data point must be an object");
      all_ids.insert(dp.at("id").get<std::string>());
    }

    std::set<std::string> defined;
    for (const auto& dp : doc.at("data_points")) {
      DataPointDef def;
      def.id = dp.at("id").get<std::string>();
      if (def.id.empty()) throw error(errc::syntax_error, "empty data point id");
      if (defined.count(def.id)) throw error(errc::duplicate_id, def.id);
      def.source = source_from_string(dp.at("source").get<std::string>());

      auto require = [&](const char* field, bool present) {
        if (dp.contains(field) != present)
          throw error(errc::syntax_error,
                      def.id + ": field '" + field + "' " + (present ? "required" : "not allowed") +
                          " for source " + to_string(def.source));
      };

      // Identifier resolution for DERIVED / validation expressions: known ids
      // defined earlier resolve; later ids are forward references.
      auto derived_lookup = [&](const std::string& name) -> std::optional<ValueType> {
        if (defined.count(name)) return ValueType::number;
        if (all_ids.count(name)) throw error(errc::forward_reference, def.id + " references " + name);
        return std::nullopt;
      };

      switch (def.source) {
        case Source::records: {
          require("measure", true);
          require("derive", false);
          require("agg", true);
          def.agg = agg_from_string(dp.at("agg").get<std::string>());
          def.measure = parse_expression(dp.at("measure").get<std::string>());
          if (type_check(*def.measure, record_field_type, false) != ValueType::number)
            throw error(errc::type_mismatch, def.id + ": measure must be numeric");
          if (dp.contains("filter")) {
            def.filter = parse_expression(dp.at("filter").get<std::string>());
            if (type_check(*def.filter, record_field_type, false) != ValueType::boolean)
              throw error(errc::type_mismatch, def.id + ": filter must be boolean");
          }
          break;
        }
        case Source::figures: {
          require("measure", true);
          require("derive", false);
          require("filter", false);
          require("agg", true);
          def.agg = agg_from_string(dp.at("agg").get<std::string>());
          def.measure = parse_expression(dp.at("measure").get<std::string>());
          if (type_check(*def.measure, figures_field_type, false) != ValueType::number)
            throw error(errc::type_mismatch, def.id + ": measure must be numeric");
          break;
        }
        case Source::derived: {
          require("derive", true);
          require("measure", false);
          require("filter", false);
          require("agg", false);
          def.derive = parse_expression(dp.at("derive").get<std::string>());
          if (type_check(*def.derive, derived_lookup, true) != ValueType::number)
            throw error(errc::type_mismatch, def.id + ": derive must be numeric");
          break;
        }
      }
      defined.insert(def.id);
      tmpl.data_points.push_back(std::move(def));
    }

    auto validation_lookup = [&](const std::string& name) -> std::optional<ValueType> {
      if (defined.count(name)) return ValueType::number;
      return std::nullopt;
    };
    std::set<std::string> rule_ids;
    if (doc.contains("validations")) {
      for (const auto& v : doc.at("validations")) {
        ValidationRule rule;
        rule.rule_id = v.at("rule_id").get<std::string>();
        if (rule.rule_id.empty() || !rule_ids.insert(rule.rule_id).second)
          throw error(errc::duplicate_id, "validation rule " + rule.rule_id);
        rule.expr = parse_expression(v.at("expr").get<std::string>());
        if (type_check(*rule.expr, validation_lookup, true) != ValueType::boolean)
          throw error(errc::type_mismatch, rule.rule_id + ": validation must be boolean");
        rule.severity = severity_from_string(v.at("severity").get<std::string>());
        tmpl.validations.push_back(std::move(rule));
      }
    }
  } catch (const ordered_json::exception& e) {
    throw error(errc::syntax_error, e.what());
  }
  return tmpl;
}

std::string serialize_template(const ReportTemplate& tmpl) {
  ordered_json doc;
  doc["template_id"] = tmpl.template_id;
  doc["version"] = tmpl.version;
  doc["frequency_blocks"] = tmpl.frequency_blocks;
  doc["annotations"] = tmpl.annotations.is_null() ? ordered_json::object() : tmpl.annotations;
  doc["data_points"] = ordered_json::array();
  for (const auto& def : tmpl.data_points) {
    ordered_json j;
    j["id"] = def.id;
    j["source"] = to_string(def.source);
    if (def.agg) j["agg"] = to_string(*def.agg);
    if (def.measure) j["measure"] = render_expression(*def.measure);
    if (def.filter) j["filter"] = render_expression(*def.filter);
    if (def.derive) j["derive"] = render_expression(*def.derive);
    doc["data_points"].push_back(std::move(j));
  }
  doc["validations"] = ordered_json::array();
  for (const auto& rule : tmpl.validations) {
    doc["validations"].push_back({{"rule_id", rule.rule_id},
                                  {"expr", render_expression(*rule.expr)},
                                  {"severity", to_string(rule.severity)}});
  }
  return doc.dump(2) + "\n";
}

bool template_equal(const ReportTemplate& a, const ReportTemplate& b) {
  if (a.template_id != b.template_id || a.version != b.version ||
      a.frequency_blocks != b.frequency_blocks || a.annotations != b.annotations ||
      a.data_points.size() != b.data_points.size() || a.validations.size() != b.validations.size())
    return false;
  auto opt_equal = [](const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return !x && !y;
    return expr_equal(*x, *y);
  };
  for (std::size_t i = 0; i < a.data_points.size(); ++i) {
    const auto& x = a.data_points[i];
    const auto& y = b.data_points[i];
    if (x.id != y.id || x.source != y.source || x.agg != y.agg) return false;
    if (!opt_equal(x.measure, y.measure) || !opt_equal(x.filter, y.filter) ||
        !opt_equal(x.derive, y.derive))
      return false;
  }
  for (std::size_t i = 0; i < a.validations.size(); ++i) {
    const auto& x = a.validations[i];
    const auto& y = b.validations[i];
    if (x.rule_id != y.rule_id || x.severity != y.severity || !expr_equal(*x.expr, *y.expr))
      return false;
  }
  return true;
}

}  // namespace dcr::mrer
