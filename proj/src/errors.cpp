#include "dcr/errors.hpp"

namespace dcr {

const char* errc_name(errc code) {
  switch (code) {
    case errc::insufficient_balance: return "INSUFFICIENT_BALANCE";
    case errc::duplicate_tx_id: return "DUPLICATE_TX_ID";
    case errc::invalid_transaction: return "INVALID_TRANSACTION";
    case errc::cursor_beyond_head: return "CURSOR_BEYOND_HEAD";
    case errc::height_beyond_head: return "HEIGHT_BEYOND_HEAD";
    case errc::duplicate_lei: return "DUPLICATE_LEI";
    case errc::address_already_bound: return "ADDRESS_ALREADY_BOUND";
    case errc::malformed_lei: return "MALFORMED_LEI";
    case errc::unknown_lei: return "UNKNOWN_LEI";
    case errc::no_figures_effective: return "NO_FIGURES_EFFECTIVE";
    case errc::unknown_asset: return "UNKNOWN_ASSET";
    case errc::registry_unavailable: return "REGISTRY_UNAVAILABLE";
    case errc::unclassified_asset: return "UNCLASSIFIED_ASSET";
    case errc::syntax_error: return "SYNTAX_ERROR";
    case errc::unknown_field: return "UNKNOWN_FIELD";
    case errc::type_mismatch: return "TYPE_MISMATCH";
    case errc::forward_reference: return "FORWARD_REFERENCE";
    case errc::duplicate_id: return "DUPLICATE_ID";
    case errc::out_of_order_append: return "OUT_OF_ORDER_APPEND";
    case errc::unauthorized_scope: return "UNAUTHORIZED_SCOPE";
    case errc::unknown_template: return "UNKNOWN_TEMPLATE";
    case errc::unknown_token: return "UNKNOWN_TOKEN";
    case errc::file_format: return "FILE_FORMAT";
  }
  return "UNKNOWN_ERROR";
}

}  // namespace dcr
