#include "dcr/warehouse.hpp"

#include <algorithm>
#include <istream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <ostream>

#include "dcr/errors.hpp"

namespace dcr {

using ordered_json = nlohmann::ordered_json;

void Warehouse::append(EnrichedRecord record) {
  std::unique_lock lock(mutex_);
  if (!records_.empty() && !(records_.back().position() < record.position()))
    throw error(errc::out_of_order_append,
                "position (" + std::to_string(record.height) + "," +
                    std::to_string(record.index_in_block) + ") not after last stored");
  records_.push_back(std::move(record));
}

void Warehouse::append_batch(std::vector<EnrichedRecord> records, ledger::Cursor new_cursor) {
  std::unique_lock lock(mutex_);
  ledger::Cursor last = records_.empty() ? ledger::Cursor{} : records_.back().position();
  for (const auto& record : records) {
    if (!(last < record.position()))
      throw error(errc::out_of_order_append, record.tx_id);
    last = record.position();
  }
  if (new_cursor < cursor_)
    throw error(errc::out_of_order_append, "cursor must never decrease");
  for (auto& record : records) records_.push_back(std::move(record));
  cursor_ = new_cursor;
}

ledger::Cursor Warehouse::cursor() const {
  std::shared_lock lock(mutex_);
  return cursor_;
}

std::int64_t Warehouse::head_height() const {
  std::shared_lock lock(mutex_);
  return cursor_.height;
}

std::size_t Warehouse::record_count() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::vector<EnrichedRecord> Warehouse::records_up_to(std::int64_t as_of_height) const {
  std::shared_lock lock(mutex_);
  std::vector<EnrichedRecord> out;
  for (const auto& record : records_) {
    if (record.height > as_of_height) break;
    out.push_back(record);
  }
  return out;
}

std::vector<MaskedRecord> Warehouse::query_records(const Scope& scope, std::int64_t as_of_height,
                                                   const Role& role) const {
  if (!policy_.allows(role, Endpoint::records, scope, registry_))
    throw error(errc::unauthorized_scope,
                role.role_id + " may not read records at " + to_string(scope));
  std::shared_lock lock(mutex_);
  if (as_of_height > cursor_.height)
    throw error(errc::height_beyond_head, std::to_string(as_of_height));
  std::vector<MaskedRecord> out;
  for (const auto& record : records_) {
    if (record.height > as_of_height) break;
    switch (scope.level) {
      case Scope::Level::local:
        if (record.owner_lei() != scope.key) continue;
        break;
      case Scope::Level::national:
        if (record.owner_jurisdiction() != scope.key) continue;
        break;
      case Scope::Level::supranational:
        break;
    }
    out.push_back(mask(record, role, masking_, registry_));
  }
  return out;
}

std::vector<const registry::InstitutionRecord*> Warehouse::in_scope(
    std::int64_t height, const std::string& jurisdiction) const {
  std::vector<const registry::InstitutionRecord*> out;
  for (const auto* record : registry_.institutions()) {
    if (record->opt_in_height > height) continue;
    if (!jurisdiction.empty() && record->jurisdiction != jurisdiction) continue;
    out.push_back(record);
  }
  return out;
}

std::vector<mrer::RecordRow> Warehouse::scope_rows(const Scope& scope,
                                                   std::int64_t as_of_height) const {
  std::vector<mrer::RecordRow> rows;
  for (const auto& record : records_) {
    if (record.height > as_of_height) break;
    switch (scope.level) {
      case Scope::Level::local:
        if (record.owner_lei() != scope.key) continue;
        break;
      case Scope::Level::national:
        if (record.owner_jurisdiction() != scope.key) continue;
        break;
      case Scope::Level::supranational:
        break;
    }
    rows.push_back(record.to_row());
  }
  return rows;
}

std::vector<mrer::FiguresRow> Warehouse::scope_figures(const Scope& scope,
                                                       std::int64_t as_of_height) const {
  std::vector<mrer::FiguresRow> rows;
  auto add = [&](const registry::InstitutionRecord& inst) {
    try {
      auto figures = registry_.figures_at(inst.lei, as_of_height);
      rows.push_back(mrer::FiguresRow{inst.lei, Rational(figures.tier1), Rational(figures.cet1),
                                      Rational(figures.hqla), Rational(figures.effective_height)});
    } catch (const error& e) {
      if (e.code() != errc::no_figures_effective) throw;
    }
  };
  switch (scope.level) {
    case Scope::Level::local: {
      const auto* inst = registry_.find_institution(scope.key);
      if (inst && inst->opt_in_height <= as_of_height) add(*inst);
      break;
    }
    case Scope::Level::national:
      for (const auto* inst : in_scope(as_of_height, scope.key)) add(*inst);
      break;
    case Scope::Level::supranational:
      for (const auto* inst : in_scope(as_of_height, "")) add(*inst);
      break;
  }
  return rows;
}

mrer::ReportInstance Warehouse::local_report(const mrer::ReportTemplate& tmpl,
                                             const std::string& lei,
                                             std::int64_t as_of_height) const {
  Scope scope = Scope::local(lei);
  return mrer::execute(tmpl, scope_rows(scope, as_of_height), scope_figures(scope, as_of_height),
                       scope, as_of_height);
}

mrer::ReportInstance Warehouse::aggregate_report(const mrer::ReportTemplate& tmpl,
                                                 const Scope& scope,
                                                 std::int64_t as_of_height) const {
  std::shared_lock lock(mutex_);
  if (as_of_height > cursor_.height)
    throw error(errc::height_beyond_head, std::to_string(as_of_height));

  switch (scope.level) {
    case Scope::Level::local:
      return local_report(tmpl, scope.key, as_of_height);
    case Scope::Level::national: {
      std::vector<mrer::ReportInstance> children;
      for (const auto* inst : in_scope(as_of_height, scope.key))
        children.push_back(local_report(tmpl, inst->lei, as_of_height));
      return mrer::compose(tmpl, children, scope_rows(scope, as_of_height),
                           scope_figures(scope, as_of_height), scope, as_of_height);
    }
    case Scope::Level::supranational: {
      std::vector<mrer::ReportInstance> nationals;
      for (const auto& jurisdiction : registry_.jurisdictions()) {
        Scope national = Scope::national(jurisdiction);
        std::vector<mrer::ReportInstance> children;
        for (const auto* inst : in_scope(as_of_height, jurisdiction))
          children.push_back(local_report(tmpl, inst->lei, as_of_height));
        nationals.push_back(mrer::compose(tmpl, children, scope_rows(national, as_of_height),
                                          scope_figures(national, as_of_height), national,
                                          as_of_height));
      }
      return mrer::compose(tmpl, nationals, scope_rows(scope, as_of_height),
                           scope_figures(scope, as_of_height), scope, as_of_height);
    }
  }
  throw error(errc::file_format, "unreachable scope level");
}

void Warehouse::export_records(std::ostream& out) const {
  std::shared_lock lock(mutex_);
  for (const auto& record : records_) out << record_to_json_line(record) << '\n';
}

void Warehouse::save(std::ostream& out) const {
  std::shared_lock lock(mutex_);
  ordered_json header;
  header["cursor_height"] = cursor_.height;
  header["cursor_index"] = cursor_.index;
  out << header.dump() << '\n';
  for (const auto& record : records_) out << record_to_json_line(record) << '\n';
}

void Warehouse::load(std::istream& in) {
  std::unique_lock lock(mutex_);
  if (!records_.empty()) throw error(errc::file_format, "load into a non-empty warehouse");
  std::string line;
  if (!std::getline(in, line)) throw error(errc::file_format, "empty warehouse file");
  try {
    ordered_json header = ordered_json::parse(line);
    cursor_ = ledger::Cursor{header.at("cursor_height").get<std::int64_t>(),
                             header.at("cursor_index").get<int>()};
  } catch (const ordered_json::exception& e) {
    throw error(errc::file_format, std::string("warehouse header: ") + e.what());
  }
  ledger::Cursor last{};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    EnrichedRecord record = record_from_json_line(line);
    if (!records_.empty() && !(last < record.position()))
      throw error(errc::out_of_order_append, record.tx_id);
    last = record.position();
    records_.push_back(std::move(record));
  }
}

}  // namespace dcr
