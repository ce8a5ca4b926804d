#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace dcr {

using BigInt = boost::multiprecision::cpp_int;

// All report values and classification weights are exact rationals; decimal
// rendering happens only at serialization boundaries.
using Rational = boost::multiprecision::cpp_rational;

// Parses a plain decimal literal ("3", "-0.85", "12.5") into an exact rational.
// Throws error(errc::file_format) on anything else.
Rational parse_decimal(std::string_view text);

// Renders an exact rational as a decimal string, rounding half-even at
// `places` fractional digits and trimming trailing zeros.
std::string render_decimal(const Rational& value, int places = 10);

bool is_integer(const Rational& value);

}  // namespace dcr
