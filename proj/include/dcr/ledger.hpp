#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace dcr::ledger {

enum class TxKind { issue, redeem, transfer, contract_call };

std::string to_string(TxKind kind);
TxKind tx_kind_from_string(const std::string& text);

// Opaque account identifier; uniqueness is the caller's concern.
using Address = std::string;

struct Transaction {
  std::string tx_id;
  TxKind kind = TxKind::transfer;
  std::string asset_id;
  std::optional<Address> from;  // absent for ISSUE
  std::optional<Address> to;    // absent for REDEEM
  std::int64_t amount = 0;      // minor units, never negative
  std::optional<std::string> contract_tag;  // present iff CONTRACT_CALL
};

struct OnChainEvent {
  std::int64_t height = 0;
  int index_in_block = 0;
  std::string tx_id;
  TxKind kind = TxKind::transfer;
  std::string asset_id;
  std::optional<Address> from;
  std::optional<Address> to;
  std::int64_t amount = 0;
  std::optional<std::string> contract_tag;
};

struct Block {
  std::int64_t height = 0;
  std::int64_t timestamp = 0;  // logical tick, strictly increasing with height
  std::vector<Transaction> transactions;
};

// Position of an event in the global (height, index) order. {-1,-1} is the
// sentinel meaning "before everything".
struct Cursor {
  std::int64_t height = -1;
  int index = -1;

  auto operator<=>(const Cursor&) const = default;
};

class Ledger;

// Exactly-once iterator over the event log; remembers its own position and
// picks up new events appended after it drained.
class Subscription {
 public:
  std::optional<OnChainEvent> next();
  Cursor cursor() const { return cursor_; }

 private:
  friend class Ledger;
  Subscription(const Ledger* ledger, Cursor from, std::size_t linear_pos)
      : ledger_(ledger), cursor_(from), pos_(linear_pos) {}

  const Ledger* ledger_;
  Cursor cursor_;
  std::size_t pos_;
};

// Deterministic single-writer chain: blocks apply atomically, every
// transaction emits exactly one event, finality is immediate.
class Ledger {
 public:
  Block append_block(std::vector<Transaction> transactions);

  Subscription subscribe(Cursor from) const;

  std::int64_t balance(const Address& address, const std::string& asset_id) const;
  std::int64_t balance_at(const Address& address, const std::string& asset_id,
                          std::int64_t height) const;

  std::int64_t head_height() const { return head_height_; }
  const std::vector<OnChainEvent>& events() const { return events_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  // Newline-delimited JSON, one event per line, stable field order.
  void export_events(std::ostream& out) const;

 private:
  friend class Subscription;

  std::map<std::pair<Address, std::string>, std::int64_t> balances_;
  std::unordered_set<std::string> tx_ids_;
  std::vector<OnChainEvent> events_;
  std::vector<Block> blocks_;
  std::int64_t head_height_ = -1;
};

std::string event_to_json_line(const OnChainEvent& event);
OnChainEvent event_from_json_line(const std::string& line);

std::vector<OnChainEvent> load_event_log(std::istream& in);

// Rebuilds a ledger by replaying an exported event log block by block.
Ledger replay_event_log(std::istream& in);

}  // namespace dcr::ledger
