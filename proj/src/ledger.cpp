#include "dcr/ledger.hpp"

#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "dcr/errors.hpp"

namespace dcr::ledger {

using ordered_json = nlohmann::ordered_json;

std::string to_string(TxKind kind) {
  switch (kind) {
    case TxKind::issue: return "ISSUE";
    case TxKind::redeem: return "REDEEM";
    case TxKind::transfer: return "TRANSFER";
    case TxKind::contract_call: return "CONTRACT_CALL";
  }
  return "?";
}

TxKind tx_kind_from_string(const std::string& text) {
  if (text == "ISSUE") return TxKind::issue;
  if (text == "REDEEM") return TxKind::redeem;
  if (text == "TRANSFER") return TxKind::transfer;
  if (text == "CONTRACT_CALL") return TxKind::contract_call;
  throw error(errc::file_format, "unknown transaction kind: " + text);
}

namespace {

void check_shape(const Transaction& tx) {
  if (tx.amount < 0) throw error(errc::invalid_transaction, tx.tx_id + ": negative amount");
  if (tx.tx_id.empty()) throw error(errc::invalid_transaction, "empty tx_id");
  if (tx.asset_id.empty()) throw error(errc::invalid_transaction, tx.tx_id + ": empty asset_id");
  switch (tx.kind) {
    case TxKind::issue:
      if (tx.from || !tx.to) throw error(errc::invalid_transaction, tx.tx_id + ": ISSUE needs only a destination");
      break;
    case TxKind::redeem:
      if (!tx.from || tx.to) throw error(errc::invalid_transaction, tx.tx_id + ": REDEEM needs only a source");
      break;
    case TxKind::transfer:
      if (!tx.from || !tx.to) throw error(errc::invalid_transaction, tx.tx_id + ": TRANSFER needs both sides");
      if (*tx.from == *tx.to) throw error(errc::invalid_transaction, tx.tx_id + ": TRANSFER to self");
      break;
    case TxKind::contract_call:
      if (!tx.from || !tx.to) throw error(errc::invalid_transaction, tx.tx_id + ": CONTRACT_CALL needs both sides");
      break;
  }
  if ((tx.kind == TxKind::contract_call) != tx.contract_tag.has_value())
    throw error(errc::invalid_transaction, tx.tx_id + ": contract_tag present iff CONTRACT_CALL");
  if (tx.from && tx.from->empty()) throw error(errc::invalid_transaction, tx.tx_id + ": empty from address");
  if (tx.to && tx.to->empty()) throw error(errc::invalid_transaction, tx.tx_id + ": empty to address");
}

}  // namespace

Block Ledger::append_block(std::vector<Transaction> transactions) {
  const std::int64_t height = head_height_ + 1;

  // Validate the whole block against a scratch copy first; a rejected block
  // leaves balances, tx ids and the event log untouched.
  auto scratch = balances_;
  std::unordered_set<std::string> block_ids;
  for (const auto& tx : transactions) {
    check_shape(tx);
    if (tx_ids_.count(tx.tx_id) || !block_ids.insert(tx.tx_id).second)
      throw error(errc::duplicate_tx_id, tx.tx_id);
    if (tx.from && (tx.kind != TxKind::contract_call || *tx.from != *tx.to)) {
      auto& src = scratch[{*tx.from, tx.asset_id}];
      if (src < tx.amount)
        throw error(errc::insufficient_balance,
                    tx.tx_id + ": " + *tx.from + " holds " + std::to_string(src) + " of " +
                        tx.asset_id + ", needs " + std::to_string(tx.amount));
      src -= tx.amount;
    }
    if (tx.to && (tx.kind != TxKind::contract_call || *tx.from != *tx.to))
      scratch[{*tx.to, tx.asset_id}] += tx.amount;
  }

  balances_ = std::move(scratch);
  int index = 0;
  for (const auto& tx : transactions) {
    tx_ids_.insert(tx.tx_id);
    events_.push_back(OnChainEvent{height, index++, tx.tx_id, tx.kind, tx.asset_id, tx.from,
                                   tx.to, tx.amount, tx.contract_tag});
  }
  head_height_ = height;
  Block block{height, height, std::move(transactions)};
  blocks_.push_back(block);
  return block;
}

Subscription Ledger::subscribe(Cursor from) const {
  if (from.height > head_height_)
    throw error(errc::cursor_beyond_head, "cursor (" + std::to_string(from.height) + "," +
                                              std::to_string(from.index) + ") beyond head");
  // First event strictly after the cursor.
  std::size_t pos = 0;
  while (pos < events_.size() &&
         Cursor{events_[pos].height, events_[pos].index_in_block} <= from)
    ++pos;
  return Subscription(this, from, pos);
}

std::optional<OnChainEvent> Subscription::next() {
  const auto& events = ledger_->events_;
  if (pos_ >= events.size()) return std::nullopt;
  const OnChainEvent& event = events[pos_++];
  cursor_ = Cursor{event.height, event.index_in_block};
  return event;
}

std::int64_t Ledger::balance(const Address& address, const std::string& asset_id) const {
  auto it = balances_.find({address, asset_id});
  return it == balances_.end() ? 0 : it->second;
}

std::int64_t Ledger::balance_at(const Address& address, const std::string& asset_id,
                                std::int64_t height) const {
  if (height > head_height_)
    throw error(errc::height_beyond_head, std::to_string(height));
  std::int64_t total = 0;
  for (const auto& event : events_) {
    if (event.height > height) break;
    if (event.asset_id != asset_id) continue;
    if (event.kind == TxKind::contract_call && event.from == event.to) continue;
    if (event.from && *event.from == address) total -= event.amount;
    if (event.to && *event.to == address) total += event.amount;
  }
  return total;
}

std::string event_to_json_line(const OnChainEvent& event) {
  ordered_json j;
  j["height"] = event.height;
  j["index_in_block"] = event.index_in_block;
  j["tx_id"] = event.tx_id;
  j["kind"] = to_string(event.kind);
  j["asset_id"] = event.asset_id;
  j["from"] = event.from ? ordered_json(*event.from) : ordered_json(nullptr);
  j["to"] = event.to ? ordered_json(*event.to) : ordered_json(nullptr);
  j["amount"] = event.amount;
  j["contract_tag"] = event.contract_tag ? ordered_json(*event.contract_tag) : ordered_json(nullptr);
  return j.dump();
}

OnChainEvent event_from_json_line(const std::string& line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
    OnChainEvent event;
    event.height = j.at("height").get<std::int64_t>();
    event.index_in_block = j.at("index_in_block").get<int>();
    event.tx_id = j.at("tx_id").get<std::string>();
    event.kind = tx_kind_from_string(j.at("kind").get<std::string>());
    event.asset_id = j.at("asset_id").get<std::string>();
    if (!j.at("from").is_null()) event.from = j.at("from").get<std::string>();
    if (!j.at("to").is_null()) event.to = j.at("to").get<std::string>();
    event.amount = j.at("amount").get<std::int64_t>();
    if (!j.at("contract_tag").is_null()) event.contract_tag = j.at("contract_tag").get<std::string>();
    return event;
  } catch (const ordered_json::exception& e) {
    throw error(errc::file_format, std::string("event line: ") + e.what());
  }
}

void Ledger::export_events(std::ostream& out) const {
  for (const auto& event : events_) out << event_to_json_line(event) << '\n';
}

std::vector<OnChainEvent> load_event_log(std::istream& in) {
  std::vector<OnChainEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    events.push_back(event_from_json_line(line));
  }
  return events;
}

Ledger replay_event_log(std::istream& in) {
  Ledger ledger;
  std::vector<Transaction> block;
  std::int64_t current = -1;
  auto flush = [&] {
    if (current >= 0) ledger.append_block(std::move(block));
    block.clear();
  };
  for (const auto& event : load_event_log(in)) {
    if (event.height != current) {
      flush();
      // Empty blocks between event-bearing heights.
      while (ledger.head_height() + 1 < event.height) ledger.append_block({});
      current = event.height;
    }
    block.push_back(Transaction{event.tx_id, event.kind, event.asset_id, event.from, event.to,
                                event.amount, event.contract_tag});
  }
  flush();
  return ledger;
}

}  // namespace dcr::ledger
