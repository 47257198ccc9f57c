#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace structsel {

/// Exact rational backed by GMP. Values are kept canonical (lowest terms,
/// positive denominator) by every helper in this header.
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed
/// text or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);

inline bool is_integral(const Rational& value) { return value.get_den() == 1; }

double to_double(const Rational& value);

}  // namespace structsel
