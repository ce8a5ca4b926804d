#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "dcr/rational.hpp"

namespace dcr::mrer {

// Small infix expression language used by report templates. Grammar (EBNF,
// also documented in docs/formats.md):
//
//   expr    = or ;
//   or      = and , { "OR" , and } ;
//   and     = not , { "AND" , not } ;
//   not     = "NOT" , not | cmp ;
//   cmp     = sum , [ ( "=" | "!=" | "<" | "<=" | ">" | ">=" ) , sum ] ;
//   sum     = term , { ( "+" | "-" ) , term } ;
//   term    = unary , { ( "*" | "/" ) , unary } ;
//   unary   = "-" , unary | primary ;
//   primary = NUMBER | IDENT | STRING | "(" , expr , ")" ;
//
// NUMBER is a decimal literal (exact rational), STRING is single-quoted,
// IDENT is [a-zA-Z_][a-zA-Z0-9_]*. Keywords AND/OR/NOT are case-sensitive.

enum class BinOp { add, sub, mul, div, eq, ne, lt, le, gt, ge, logic_and, logic_or };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { number, string, ident, negate, logic_not, binary };

  Kind kind = Kind::number;
  Rational number;       // Kind::number
  std::string text;      // Kind::string / Kind::ident
  BinOp op = BinOp::add; // Kind::binary
  ExprPtr lhs, rhs;      // binary; unary uses lhs only
};

// Throws error(errc::syntax_error) with a character offset in the message.
ExprPtr parse_expression(std::string_view source);

// Canonical infix rendering; parse_expression(render_expression(e)) yields an
// AST equal to e.
std::string render_expression(const Expr& expr);

bool expr_equal(const Expr& a, const Expr& b);

enum class ValueType { number, text, boolean };

// Static type check. `lookup` maps identifiers to their type, or nullopt for
// unknown names. Throws unknown_field / type_mismatch; division is rejected
// unless `allow_division` (only DERIVED and validation contexts permit it).
ValueType type_check(const Expr& expr,
                     const std::function<std::optional<ValueType>(const std::string&)>& lookup,
                     bool allow_division);

using Value = std::variant<Rational, std::string, bool>;

// Evaluates a type-checked expression. Division by zero yields 0 and sets
// *division_by_zero when provided.
Value evaluate(const Expr& expr,
               const std::function<Value(const std::string&)>& bindings,
               bool* division_by_zero = nullptr);

}  // namespace dcr::mrer
