#include "dcr/rational.hpp"

#include <cctype>

#include "dcr/errors.hpp"

namespace dcr {

Rational parse_decimal(std::string_view text) {
  if (text.empty()) throw error(errc::file_format, "empty decimal literal");
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  BigInt numerator = 0;
  BigInt denominator = 1;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c == '.') {
      if (seen_point) throw error(errc::file_format, "malformed decimal literal: " + std::string(text));
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw error(errc::file_format, "malformed decimal literal: " + std::string(text));
    numerator = numerator * 10 + (c - '0');
    if (seen_point) denominator *= 10;
    any_digit = true;
  }
  if (!any_digit) throw error(errc::file_format, "malformed decimal literal: " + std::string(text));
  if (negative) numerator = -numerator;
  return Rational(numerator, denominator);
}

std::string render_decimal(const Rational& value, int places) {
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;

  // scaled = value * 10^places, rounded half-even to an integer.
  BigInt num = numerator(value) * scale;
  BigInt den = denominator(value);  // > 0 for cpp_rational
  BigInt q = num / den;
  BigInt r = num % den;
  if (r < 0) {
    q -= 1;
    r += den;
  }
  BigInt twice = r * 2;
  if (twice > den || (twice == den && (q % 2) != 0)) q += 1;

  bool negative = q < 0;
  if (negative) q = -q;
  BigInt whole = q / scale;
  BigInt frac = q % scale;

  std::string out;
  if (negative && (whole != 0 || frac != 0)) out += '-';
  out += whole.str();
  if (frac != 0) {
    std::string digits = frac.str();
    digits.insert(digits.begin(), static_cast<std::size_t>(places) - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

bool is_integer(const Rational& value) { return denominator(value) == 1; }

}  // namespace dcr
