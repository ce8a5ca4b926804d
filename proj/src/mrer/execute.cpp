#include "dcr/mrer/execute.hpp"

#include <algorithm>
#include <map>

#include "dcr/errors.hpp"

namespace dcr::mrer {

using ordered_json = nlohmann::ordered_json;

const Rational& ReportInstance::value(const std::string& id) const {
  for (const auto& [key, v] : values)
    if (key == id) return v;
  throw error(errc::unknown_field, "no data point " + id + " in instance");
}

bool ReportInstance::submittable() const {
  return std::none_of(validation_results.begin(), validation_results.end(),
                      [](const ValidationResult& r) {
                        return r.severity == Severity::error && !r.passed;
                      });
}

Value record_field(const RecordRow& row, const std::string& name) {
  if (name == "amount") return row.amount;
  if (name == "risk_weight") return row.risk_weight;
  if (name == "height") return Rational(row.height);
  if (name == "index_in_block") return Rational(row.index_in_block);
  if (name == "inflow_factor") return row.inflow_factor;
  if (name == "outflow_factor") return row.outflow_factor;
  if (name == "tx_id") return row.tx_id;
  if (name == "kind") return row.kind;
  if (name == "asset_id") return row.asset_id;
  if (name == "exposure_class") return row.exposure_class;
  if (name == "hqla_level") return row.hqla_level;
  if (name == "lei") return row.lei;
  if (name == "counterparty") return row.counterparty;
  if (name == "jurisdiction") return row.jurisdiction;
  if (name == "direction") return row.direction;
  if (name == "contract_tag") return row.contract_tag;
  throw error(errc::unknown_field, name);
}

Value figures_field(const FiguresRow& row, const std::string& name) {
  if (name == "tier1") return row.tier1;
  if (name == "cet1") return row.cet1;
  if (name == "hqla") return row.hqla;
  if (name == "effective_height") return row.effective_height;
  throw error(errc::unknown_field, name);
}

namespace {

struct Evaluation {
  std::map<std::string, Rational> by_id;
  std::vector<std::pair<std::string, Rational>> ordered;
  std::vector<ValidationResult> warnings;  // automatic div-zero entries

  void set(const std::string& id, Rational value, bool div_zero) {
    by_id[id] = value;
    ordered.emplace_back(id, std::move(value));
    if (div_zero)
      warnings.push_back(ValidationResult{"warn_div_zero:" + id, false, Severity::warning});
  }
};

Rational aggregate_records(const DataPointDef& def, std::span<const RecordRow> records) {
  Rational result = 0;
  bool first = true;
  std::pair<std::int64_t, int> latest_pos{-1, -1};
  for (const RecordRow& row : records) {
    auto bind = [&](const std::string& name) { return record_field(row, name); };
    if (def.filter && !std::get<bool>(evaluate(*def.filter, bind))) continue;
    if (def.agg == Agg::count) {
      result += 1;
      continue;
    }
    Rational measured = std::get<Rational>(evaluate(*def.measure, bind));
    switch (*def.agg) {
      case Agg::sum:
        result += measured;
        break;
      case Agg::max:
        if (first || measured > result) result = measured;
        break;
      case Agg::min:
        if (first || measured < result) result = measured;
        break;
      case Agg::latest: {
        std::pair<std::int64_t, int> pos{row.height, row.index_in_block};
        if (first || pos > latest_pos) {
          latest_pos = pos;
          result = measured;
        }
        break;
      }
      case Agg::count:
        break;
    }
    first = false;
  }
  return result;
}

Rational aggregate_figures(const DataPointDef& def, std::span<const FiguresRow> figures) {
  Rational result = 0;
  bool first = true;
  std::pair<Rational, std::string> latest_key;
  for (const FiguresRow& row : figures) {
    auto bind = [&](const std::string& name) { return figures_field(row, name); };
    if (def.agg == Agg::count) {
      result += 1;
      continue;
    }
    Rational measured = std::get<Rational>(evaluate(*def.measure, bind));
    switch (*def.agg) {
      case Agg::sum:
        result += measured;
        break;
      case Agg::max:
        if (first || measured > result) result = measured;
        break;
      case Agg::min:
        if (first || measured < result) result = measured;
        break;
      case Agg::latest: {
        // Greatest effective height wins; lei breaks ties deterministically.
        std::pair<Rational, std::string> key{row.effective_height, row.lei};
        if (first || key > latest_key) {
          latest_key = key;
          result = measured;
        }
        break;
      }
      case Agg::count:
        break;
    }
    first = false;
  }
  return result;
}

void run_validations(const ReportTemplate& tmpl, Evaluation& eval) {
  for (const auto& rule : tmpl.validations) {
    bool div_zero = false;
    auto bind = [&](const std::string& name) -> Value { return eval.by_id.at(name); };
    bool passed = std::get<bool>(evaluate(*rule.expr, bind, &div_zero)) && !div_zero;
    eval.warnings.push_back(ValidationResult{rule.rule_id, passed, rule.severity});
  }
}

ReportInstance finish(const ReportTemplate& tmpl, Evaluation eval, Scope scope,
                      std::int64_t as_of_height) {
  run_validations(tmpl, eval);
  ReportInstance instance;
  instance.template_id = tmpl.template_id;
  instance.version = tmpl.version;
  instance.scope = std::move(scope);
  instance.as_of_height = as_of_height;
  instance.values = std::move(eval.ordered);
  instance.validation_results = std::move(eval.warnings);
  return instance;
}

Rational derive_value(const DataPointDef& def, const Evaluation& eval, bool* div_zero) {
  auto bind = [&](const std::string& name) -> Value { return eval.by_id.at(name); };
  return std::get<Rational>(evaluate(*def.derive, bind, div_zero));
}

}  // namespace

ReportInstance execute(const ReportTemplate& tmpl, std::span<const RecordRow> records,
                       std::span<const FiguresRow> figures, Scope scope,
                       std::int64_t as_of_height) {
  Evaluation eval;
  for (const auto& def : tmpl.data_points) {
    bool div_zero = false;
    Rational value;
    switch (def.source) {
      case Source::records:
        value = aggregate_records(def, records);
        break;
      case Source::figures:
        value = aggregate_figures(def, figures);
        break;
      case Source::derived:
        value = derive_value(def, eval, &div_zero);
        break;
    }
    eval.set(def.id, std::move(value), div_zero);
  }
  return finish(tmpl, std::move(eval), std::move(scope), as_of_height);
}

ReportInstance compose(const ReportTemplate& tmpl, std::span<const ReportInstance> children,
                       std::span<const RecordRow> scope_records,
                       std::span<const FiguresRow> scope_figures, Scope scope,
                       std::int64_t as_of_height) {
  Evaluation eval;
  for (const auto& def : tmpl.data_points) {
    bool div_zero = false;
    Rational value = 0;
    if (def.source == Source::derived) {
      value = derive_value(def, eval, &div_zero);
    } else if (def.agg == Agg::latest) {
      value = def.source == Source::records ? aggregate_records(def, scope_records)
                                            : aggregate_figures(def, scope_figures);
    } else {
      bool first = true;
      for (const auto& child : children) {
        const Rational& v = child.value(def.id);
        switch (*def.agg) {
          case Agg::sum:
          case Agg::count:
            value += v;
            break;
          case Agg::max:
            if (first || v > value) value = v;
            break;
          case Agg::min:
            if (first || v < value) value = v;
            break;
          case Agg::latest:
            break;
        }
        first = false;
      }
    }
    eval.set(def.id, std::move(value), div_zero);
  }
  return finish(tmpl, std::move(eval), std::move(scope), as_of_height);
}

std::vector<ValidationResult> validate(const ReportTemplate& tmpl,
                                       const ReportInstance& instance) {
  std::vector<ValidationResult> results;
  for (const auto& rule : tmpl.validations) {
    bool div_zero = false;
    auto bind = [&](const std::string& name) -> Value { return instance.value(name); };
    bool passed = std::get<bool>(evaluate(*rule.expr, bind, &div_zero)) && !div_zero;
    results.push_back(ValidationResult{rule.rule_id, passed, rule.severity});
  }
  return results;
}

std::string serialize_instance(const ReportInstance& instance) {
  ordered_json doc;
  doc["template_id"] = instance.template_id;
  doc["version"] = instance.version;
  doc["scope_level"] = to_string(instance.scope.level);
  doc["scope_key"] = instance.scope.key;
  doc["as_of_height"] = instance.as_of_height;
  doc["values"] = ordered_json::object();
  for (const auto& [id, value] : instance.values) doc["values"][id] = render_decimal(value);
  doc["validation_results"] = ordered_json::array();
  for (const auto& result : instance.validation_results) {
    doc["validation_results"].push_back({{"rule_id", result.rule_id},
                                         {"passed", result.passed},
                                         {"severity", to_string(result.severity)}});
  }
  doc["submittable"] = instance.submittable();
  return doc.dump();
}

}  // namespace dcr::mrer
