#pragma once

#include <stdexcept>
#include <string>

namespace dcr {

enum class errc {
  // ledger
  insufficient_balance,
  duplicate_tx_id,
  invalid_transaction,
  cursor_beyond_head,
  height_beyond_head,
  // registry
  duplicate_lei,
  address_already_bound,
  malformed_lei,
  unknown_lei,
  no_figures_effective,
  unknown_asset,
  // composer
  registry_unavailable,
  unclassified_asset,
  // mrer
  syntax_error,
  unknown_field,
  type_mismatch,
  forward_reference,
  duplicate_id,
  // warehouse / service
  out_of_order_append,
  unauthorized_scope,
  unknown_template,
  unknown_token,
  // io
  file_format,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
 public:
  error(errc code, std::string message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace dcr
