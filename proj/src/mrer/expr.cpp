#include "dcr/mrer/expr.hpp"

#include <cctype>

#include "dcr/errors.hpp"

namespace dcr::mrer {

namespace {

struct Token {
  enum class Kind { number, string, ident, op, lparen, rparen, end };
  Kind kind = Kind::end;
  std::string text;
  Rational number;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token token;
    token.offset = pos_;
    if (pos_ >= src_.size()) return token;
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      bool point = false;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
        if (src_[pos_] == '.') {
          if (point) break;
          point = true;
        }
        ++pos_;
      }
      std::string text(src_.substr(start, pos_ - start));
      if (text.back() == '.') fail(start, "malformed number");
      token.kind = Token::Kind::number;
      token.number = parse_decimal(text);
      return token;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      token.kind = Token::Kind::ident;
      token.text = std::string(src_.substr(start, pos_ - start));
      return token;
    }
    if (c == '\'') {
      std::size_t start = ++pos_;
      while (pos_ < src_.size() && src_[pos_] != '\'') ++pos_;
      if (pos_ >= src_.size()) fail(start - 1, "unterminated string literal");
      token.kind = Token::Kind::string;
      token.text = std::string(src_.substr(start, pos_ - start));
      ++pos_;
      return token;
    }
    if (c == '(') {
      token.kind = Token::Kind::lparen;
      ++pos_;
      return token;
    }
    if (c == ')') {
      token.kind = Token::Kind::rparen;
      ++pos_;
      return token;
    }
    for (std::string_view op : {"<=", ">=", "!=", "=", "<", ">", "+", "-", "*", "/"}) {
      if (src_.substr(pos_, op.size()) == op) {
        token.kind = Token::Kind::op;
        token.text = std::string(op);
        pos_ += op.size();
        return token;
      }
    }
    fail(pos_, std::string("unexpected character '") + c + "'");
    return token;  // unreachable
  }

  [[noreturn]] static void fail(std::size_t offset, const std::string& message) {
    throw error(errc::syntax_error, "at offset " + std::to_string(offset) + ": " + message);
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { advance(); }

  ExprPtr parse() {
    ExprPtr expr = parse_or();
    if (current_.kind != Token::Kind::end)
      Lexer::fail(current_.offset, "trailing input after expression");
    return expr;
  }

 private:
  void advance() { current_ = lexer_.next(); }

  bool at_keyword(std::string_view kw) const {
    return current_.kind == Token::Kind::ident && current_.text == kw;
  }

  bool at_op(std::string_view op) const {
    return current_.kind == Token::Kind::op && current_.text == op;
  }

  static ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::binary;
    node->op = op;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (at_keyword("OR")) {
      advance();
      lhs = make_binary(BinOp::logic_or, lhs, parse_and());
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (at_keyword("AND")) {
      advance();
      lhs = make_binary(BinOp::logic_and, lhs, parse_not());
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (at_keyword("NOT")) {
      advance();
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::logic_not;
      node->lhs = parse_not();
      return node;
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_sum();
    static const std::pair<std::string_view, BinOp> ops[] = {
        {"=", BinOp::eq},  {"!=", BinOp::ne}, {"<", BinOp::lt},
        {"<=", BinOp::le}, {">", BinOp::gt},  {">=", BinOp::ge}};
    for (auto [text, op] : ops) {
      if (at_op(text)) {
        advance();
        return make_binary(op, lhs, parse_sum());
      }
    }
    return lhs;
  }

  ExprPtr parse_sum() {
    ExprPtr lhs = parse_term();
    while (at_op("+") || at_op("-")) {
      BinOp op = current_.text == "+" ? BinOp::add : BinOp::sub;
      advance();
      lhs = make_binary(op, lhs, parse_term());
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_unary();
    while (at_op("*") || at_op("/")) {
      BinOp op = current_.text == "*" ? BinOp::mul : BinOp::div;
      advance();
      lhs = make_binary(op, lhs, parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at_op("-")) {
      advance();
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::negate;
      node->lhs = parse_unary();
      return node;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    auto node = std::make_shared<Expr>();
    switch (current_.kind) {
      case Token::Kind::number:
        node->kind = Expr::Kind::number;
        node->number = current_.number;
        advance();
        return node;
      case Token::Kind::string:
        node->kind = Expr::Kind::string;
        node->text = current_.text;
        advance();
        return node;
      case Token::Kind::ident:
        if (current_.text == "AND" || current_.text == "OR" || current_.text == "NOT")
          Lexer::fail(current_.offset, "keyword '" + current_.text + "' is not an operand");
        node->kind = Expr::Kind::ident;
        node->text = current_.text;
        advance();
        return node;
      case Token::Kind::lparen: {
        advance();
        ExprPtr inner = parse_or();
        if (current_.kind != Token::Kind::rparen)
          Lexer::fail(current_.offset, "expected ')'");
        advance();
        return inner;
      }
      default:
        Lexer::fail(current_.offset, "expected an operand");
    }
  }

  Lexer lexer_;
  Token current_;
};

int precedence(const Expr& expr) {
  switch (expr.kind) {
    case Expr::Kind::number:
    case Expr::Kind::string:
    case Expr::Kind::ident:
      return 100;
    case Expr::Kind::negate:
      return 60;
    case Expr::Kind::logic_not:
      return 30;
    case Expr::Kind::binary:
      switch (expr.op) {
        case BinOp::mul:
        case BinOp::div: return 50;
        case BinOp::add:
        case BinOp::sub: return 40;
        case BinOp::eq:
        case BinOp::ne:
        case BinOp::lt:
        case BinOp::le:
        case BinOp::gt:
        case BinOp::ge: return 35;
        case BinOp::logic_and: return 20;
        case BinOp::logic_or: return 10;
      }
  }
  return 0;
}

const char* op_text(BinOp op) {
  switch (op) {
    case BinOp::add: return "+";
    case BinOp::sub: return "-";
    case BinOp::mul: return "*";
    case BinOp::div: return "/";
    case BinOp::eq: return "=";
    case BinOp::ne: return "!=";
    case BinOp::lt: return "<";
    case BinOp::le: return "<=";
    case BinOp::gt: return ">";
    case BinOp::ge: return ">=";
    case BinOp::logic_and: return "AND";
    case BinOp::logic_or: return "OR";
  }
  return "?";
}

void render(const Expr& expr, int parent_precedence, std::string& out) {
  const int own = precedence(expr);
  const bool parens = own < parent_precedence;
  if (parens) out += '(';
  switch (expr.kind) {
    case Expr::Kind::number:
      out += render_decimal(expr.number);
      break;
    case Expr::Kind::string:
      out += '\'';
      out += expr.text;
      out += '\'';
      break;
    case Expr::Kind::ident:
      out += expr.text;
      break;
    case Expr::Kind::negate:
      out += '-';
      render(*expr.lhs, own + 1, out);
      break;
    case Expr::Kind::logic_not:
      out += "NOT ";
      render(*expr.lhs, own, out);
      break;
    case Expr::Kind::binary:
      render(*expr.lhs, own, out);
      out += ' ';
      out += op_text(expr.op);
      out += ' ';
      // Right operand needs a bump: operators are left-associative.
      render(*expr.rhs, own + 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

ExprPtr parse_expression(std::string_view source) { return Parser(source).parse(); }

std::string render_expression(const Expr& expr) {
  std::string out;
  render(expr, 0, out);
  return out;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::number: return a.number == b.number;
    case Expr::Kind::string:
    case Expr::Kind::ident: return a.text == b.text;
    case Expr::Kind::negate:
    case Expr::Kind::logic_not: return expr_equal(*a.lhs, *b.lhs);
    case Expr::Kind::binary:
      return a.op == b.op && expr_equal(*a.lhs, *b.lhs) && expr_equal(*a.rhs, *b.rhs);
  }
  return false;
}

ValueType type_check(const Expr& expr,
                     const std::function<std::optional<ValueType>(const std::string&)>& lookup,
                     bool allow_division) {
  auto expect = [&](const Expr& node, ValueType want) {
    ValueType got = type_check(node, lookup, allow_division);
    if (got != want)
      throw error(errc::type_mismatch, "in '" + render_expression(node) + "'");
    return got;
  };
  switch (expr.kind) {
    case Expr::Kind::number:
      return ValueType::number;
    case Expr::Kind::string:
      return ValueType::text;
    case Expr::Kind::ident: {
      auto type = lookup(expr.text);
      if (!type) throw error(errc::unknown_field, expr.text);
      return *type;
    }
    case Expr::Kind::negate:
      expect(*expr.lhs, ValueType::number);
      return ValueType::number;
    case Expr::Kind::logic_not:
      expect(*expr.lhs, ValueType::boolean);
      return ValueType::boolean;
    case Expr::Kind::binary:
      switch (expr.op) {
        case BinOp::div:
          if (!allow_division)
            throw error(errc::type_mismatch,
                        "division is only allowed in DERIVED and validation expressions");
          [[fallthrough]];
        case BinOp::add:
        case BinOp::sub:
        case BinOp::mul:
          expect(*expr.lhs, ValueType::number);
          expect(*expr.rhs, ValueType::number);
          return ValueType::number;
        case BinOp::lt:
        case BinOp::le:
        case BinOp::gt:
        case BinOp::ge:
          expect(*expr.lhs, ValueType::number);
          expect(*expr.rhs, ValueType::number);
          return ValueType::boolean;
        case BinOp::eq:
        case BinOp::ne: {
          ValueType lhs = type_check(*expr.lhs, lookup, allow_division);
          ValueType rhs = type_check(*expr.rhs, lookup, allow_division);
          if (lhs != rhs || lhs == ValueType::boolean)
            throw error(errc::type_mismatch, "in '" + render_expression(expr) + "'");
          return ValueType::boolean;
        }
        case BinOp::logic_and:
        case BinOp::logic_or:
          expect(*expr.lhs, ValueType::boolean);
          expect(*expr.rhs, ValueType::boolean);
          return ValueType::boolean;
      }
  }
  throw error(errc::type_mismatch, "unreachable expression kind");
}

Value evaluate(const Expr& expr,
               const std::function<Value(const std::string&)>& bindings,
               bool* division_by_zero) {
  switch (expr.kind) {
    case Expr::Kind::number:
      return expr.number;
    case Expr::Kind::string:
      return expr.text;
    case Expr::Kind::ident:
      return bindings(expr.text);
    case Expr::Kind::negate:
      return -std::get<Rational>(evaluate(*expr.lhs, bindings, division_by_zero));
    case Expr::Kind::logic_not:
      return !std::get<bool>(evaluate(*expr.lhs, bindings, division_by_zero));
    case Expr::Kind::binary: {
      if (expr.op == BinOp::logic_and || expr.op == BinOp::logic_or) {
        bool lhs = std::get<bool>(evaluate(*expr.lhs, bindings, division_by_zero));
        bool rhs = std::get<bool>(evaluate(*expr.rhs, bindings, division_by_zero));
        return expr.op == BinOp::logic_and ? (lhs && rhs) : (lhs || rhs);
      }
      Value lhs = evaluate(*expr.lhs, bindings, division_by_zero);
      Value rhs = evaluate(*expr.rhs, bindings, division_by_zero);
      if (expr.op == BinOp::eq || expr.op == BinOp::ne) {
        bool equal = std::holds_alternative<std::string>(lhs)
                         ? std::get<std::string>(lhs) == std::get<std::string>(rhs)
                         : std::get<Rational>(lhs) == std::get<Rational>(rhs);
        return expr.op == BinOp::eq ? equal : !equal;
      }
      const Rational& a = std::get<Rational>(lhs);
      const Rational& b = std::get<Rational>(rhs);
      switch (expr.op) {
        case BinOp::add: return a + b;
        case BinOp::sub: return a - b;
        case BinOp::mul: return a * b;
        case BinOp::div:
          if (b == 0) {
            if (division_by_zero) *division_by_zero = true;
            return Rational(0);
          }
          return a / b;
        case BinOp::lt: return a < b;
        case BinOp::le: return a <= b;
        case BinOp::gt: return a > b;
        case BinOp::ge: return a >= b;
        default: break;
      }
    }
  }
  throw error(errc::type_mismatch, "unreachable expression kind");
}

}  // namespace dcr::mrer
