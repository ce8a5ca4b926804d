#include "dcr/harness/push_oracle.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <nlohmann/json.hpp>
#include <set>

#include "dcr/errors.hpp"

namespace dcr::harness {

using json = nlohmann::json;

PushOracle::PushOracle(std::istream& events, std::istream& registry_doc) {
  std::string line;
  while (std::getline(events, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw error(errc::file_format, std::string("oracle event line: ") + e.what());
    }
    Event event;
    event.height = j.at("height").get<std::int64_t>();
    event.index_in_block = j.at("index_in_block").get<int>();
    event.tx_id = j.at("tx_id").get<std::string>();
    event.kind = j.at("kind").get<std::string>();
    event.asset_id = j.at("asset_id").get<std::string>();
    if (!j.at("from").is_null()) event.from = j.at("from").get<std::string>();
    if (!j.at("to").is_null()) event.to = j.at("to").get<std::string>();
    event.amount = j.at("amount").get<std::int64_t>();
    if (!j.at("contract_tag").is_null()) event.contract_tag = j.at("contract_tag").get<std::string>();
    events_.push_back(std::move(event));
  }

  json doc;
  try {
    doc = json::parse(registry_doc);
    for (const auto& j : doc.at("institutions")) {
      Institution inst;
      inst.lei = j.at("lei").get<std::string>();
      inst.jurisdiction = j.at("jurisdiction").get<std::string>();
      inst.opt_in_height = j.at("opt_in_height").get<std::int64_t>();
      for (const auto& f : j.at("capital_figures"))
        inst.figures.push_back({f.at("effective_height").get<std::int64_t>(),
                                f.at("tier1").get<std::int64_t>(),
                                f.at("cet1").get<std::int64_t>(),
                                f.at("hqla").get<std::int64_t>()});
      institutions_.push_back(std::move(inst));
    }
    for (const auto& j : doc.at("bindings")) {
      Binding binding;
      binding.address = j.at("address").get<std::string>();
      binding.lei = j.at("lei").get<std::string>();
      binding.effective_height = j.at("effective_height").get<std::int64_t>();
      if (!j.at("revoked_height").is_null())
        binding.revoked_height = j.at("revoked_height").get<std::int64_t>();
      bindings_.push_back(std::move(binding));
    }
    for (const auto& j : doc.at("assets")) {
      Asset asset;
      asset.asset_id = j.at("asset_id").get<std::string>();
      asset.exposure_class = j.at("exposure_class").get<std::string>();
      asset.risk_weight = parse_decimal(j.at("risk_weight").get<std::string>());
      asset.hqla_level = j.at("hqla_level").get<std::string>();
      asset.outflow_factor = parse_decimal(j.at("outflow_factor").get<std::string>());
      asset.inflow_factor = parse_decimal(j.at("inflow_factor").get<std::string>());
      assets_.push_back(std::move(asset));
    }
  } catch (const json::exception& e) {
    throw error(errc::file_format, std::string("oracle registry: ") + e.what());
  }
}

std::string PushOracle::resolve(const std::string& address, std::int64_t height) const {
  if (address.empty()) return {};
  for (const auto& binding : bindings_) {
    if (binding.address != address) continue;
    if (height < binding.effective_height) continue;
    if (binding.revoked_height >= 0 && height > binding.revoked_height) continue;
    for (const auto& inst : institutions_)
      if (inst.lei == binding.lei && inst.opt_in_height <= height) return binding.lei;
  }
  return {};
}

std::vector<mrer::RecordRow> PushOracle::rows_for(const Scope& scope, std::int64_t height) const {
  std::vector<mrer::RecordRow> rows;
  for (const auto& event : events_) {
    if (event.height > height) continue;
    std::string from_lei = resolve(event.from, event.height);
    std::string to_lei = resolve(event.to, event.height);
    if (from_lei.empty() && to_lei.empty()) continue;

    const std::string owner = !to_lei.empty() ? to_lei : from_lei;
    std::string owner_jurisdiction;
    for (const auto& inst : institutions_)
      if (inst.lei == owner) owner_jurisdiction = inst.jurisdiction;

    switch (scope.level) {
      case Scope::Level::local:
        if (owner != scope.key) continue;
        break;
      case Scope::Level::national:
        if (owner_jurisdiction != scope.key) continue;
        break;
      case Scope::Level::supranational:
        break;
    }

    mrer::RecordRow row;
    row.height = event.height;
    row.index_in_block = event.index_in_block;
    row.tx_id = event.tx_id;
    row.amount = Rational(event.amount);
    row.kind = event.kind;
    row.asset_id = event.asset_id;
    row.lei = owner;
    row.jurisdiction = owner_jurisdiction;
    row.direction = !to_lei.empty() ? "IN" : "OUT";
    row.contract_tag = event.contract_tag;
    if (!to_lei.empty())
      row.counterparty = !from_lei.empty() ? from_lei : "EXTERNAL";
    else
      row.counterparty = "EXTERNAL";

    // Classification defaults mirror the documented lenient policy.
    row.exposure_class = "OTHER";
    row.risk_weight = 1;
    row.hqla_level = "NONE";
    row.outflow_factor = 1;
    row.inflow_factor = 1;
    for (const auto& asset : assets_) {
      if (asset.asset_id != event.asset_id) continue;
      row.exposure_class = asset.exposure_class;
      row.risk_weight = asset.risk_weight;
      row.hqla_level = asset.hqla_level;
      row.outflow_factor = asset.outflow_factor;
      row.inflow_factor = asset.inflow_factor;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<mrer::FiguresRow> PushOracle::figures_for(const Scope& scope,
                                                      std::int64_t height) const {
  std::vector<mrer::FiguresRow> rows;
  std::vector<const Institution*> sorted;
  for (const auto& inst : institutions_) sorted.push_back(&inst);
  std::sort(sorted.begin(), sorted.end(),
            [](const Institution* a, const Institution* b) { return a->lei < b->lei; });
  for (const auto* inst : sorted) {
    if (inst->opt_in_height > height) continue;
    switch (scope.level) {
      case Scope::Level::local:
        if (inst->lei != scope.key) continue;
        break;
      case Scope::Level::national:
        if (inst->jurisdiction != scope.key) continue;
        break;
      case Scope::Level::supranational:
        break;
    }
    const std::array<std::int64_t, 4>* best = nullptr;
    for (const auto& figures : inst->figures)
      if (figures[0] <= height && (!best || figures[0] > (*best)[0])) best = &figures;
    if (!best) continue;
    rows.push_back(mrer::FiguresRow{inst->lei, Rational((*best)[1]), Rational((*best)[2]),
                                    Rational((*best)[3]), Rational((*best)[0])});
  }
  return rows;
}

namespace {

// Naive record-by-record evaluation, written against the aggregation
// semantics directly rather than the pull path's implementation.
Rational naive_point(const mrer::DataPointDef& def, const std::vector<mrer::RecordRow>& records,
                     const std::vector<mrer::FiguresRow>& figures,
                     const std::map<std::string, Rational>& prior, bool* div_zero) {
  if (def.source == mrer::Source::derived) {
    auto bind = [&](const std::string& name) -> mrer::Value { return prior.at(name); };
    return std::get<Rational>(mrer::evaluate(*def.derive, bind, div_zero));
  }

  std::vector<Rational> measures;
  std::vector<std::pair<std::pair<Rational, std::string>, Rational>> keyed;  // for LATEST
  if (def.source == mrer::Source::records) {
    for (const auto& row : records) {
      auto bind = [&](const std::string& name) { return mrer::record_field(row, name); };
      if (def.filter && !std::get<bool>(mrer::evaluate(*def.filter, bind))) continue;
      Rational measured = def.agg == mrer::Agg::count
                              ? Rational(0)
                              : std::get<Rational>(mrer::evaluate(*def.measure, bind));
      measures.push_back(measured);
      keyed.push_back({{Rational(row.height) * 1000000 + row.index_in_block, ""}, measured});
    }
  } else {
    for (const auto& row : figures) {
      auto bind = [&](const std::string& name) { return mrer::figures_field(row, name); };
      Rational measured = def.agg == mrer::Agg::count
                              ? Rational(0)
                              : std::get<Rational>(mrer::evaluate(*def.measure, bind));
      measures.push_back(measured);
      keyed.push_back({{row.effective_height, row.lei}, measured});
    }
  }

  if (measures.empty()) return 0;
  switch (*def.agg) {
    case mrer::Agg::count:
      return Rational(static_cast<std::int64_t>(measures.size()));
    case mrer::Agg::sum: {
      Rational total = 0;
      for (const auto& m : measures) total += m;
      return total;
    }
    case mrer::Agg::max:
      return *std::max_element(measures.begin(), measures.end());
    case mrer::Agg::min:
      return *std::min_element(measures.begin(), measures.end());
    case mrer::Agg::latest: {
      const auto* best = &keyed.front();
      for (const auto& entry : keyed)
        if (entry.first > best->first) best = &entry;
      return best->second;
    }
  }
  return 0;
}

mrer::ReportInstance naive_execute(const mrer::ReportTemplate& tmpl,
                                   const std::vector<mrer::RecordRow>& records,
                                   const std::vector<mrer::FiguresRow>& figures,
                                   const Scope& scope, std::int64_t height) {
  mrer::ReportInstance instance;
  instance.template_id = tmpl.template_id;
  instance.version = tmpl.version;
  instance.scope = scope;
  instance.as_of_height = height;
  std::map<std::string, Rational> values;
  for (const auto& def : tmpl.data_points) {
    bool div_zero = false;
    Rational value = naive_point(def, records, figures, values, &div_zero);
    values[def.id] = value;
    instance.values.emplace_back(def.id, value);
    if (div_zero)
      instance.validation_results.push_back(
          mrer::ValidationResult{"warn_div_zero:" + def.id, false, mrer::Severity::warning});
  }
  for (const auto& rule : tmpl.validations) {
    bool div_zero = false;
    auto bind = [&](const std::string& name) -> mrer::Value { return values.at(name); };
    bool passed = std::get<bool>(mrer::evaluate(*rule.expr, bind, &div_zero)) && !div_zero;
    instance.validation_results.push_back(
        mrer::ValidationResult{rule.rule_id, passed, rule.severity});
  }
  return instance;
}

}  // namespace

mrer::ReportInstance PushOracle::report(const mrer::ReportTemplate& tmpl, const Scope& scope,
                                        std::int64_t period_end_height) const {
  return naive_execute(tmpl, rows_for(scope, period_end_height),
                       figures_for(scope, period_end_height), scope, period_end_height);
}

std::map<Scope, mrer::ReportInstance> PushOracle::report_all_scopes(
    const mrer::ReportTemplate& tmpl, std::int64_t period_end_height) const {
  std::map<Scope, mrer::ReportInstance> out;
  for (const auto& lei : bank_leis()) {
    Scope scope = Scope::local(lei);
    out.emplace(scope, report(tmpl, scope, period_end_height));
  }
  for (const auto& jurisdiction : jurisdictions()) {
    Scope scope = Scope::national(jurisdiction);
    out.emplace(scope, report(tmpl, scope, period_end_height));
  }
  Scope scope = Scope::supranational();
  out.emplace(scope, report(tmpl, scope, period_end_height));
  return out;
}

std::vector<std::string> PushOracle::bank_leis() const {
  std::set<std::string> leis;
  for (const auto& inst : institutions_) leis.insert(inst.lei);
  return {leis.begin(), leis.end()};
}

std::vector<std::string> PushOracle::jurisdictions() const {
  std::set<std::string> out;
  for (const auto& inst : institutions_) out.insert(inst.jurisdiction);
  return {out.begin(), out.end()};
}

}  // namespace dcr::harness
