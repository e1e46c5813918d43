#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qbdst {

// Exact costs, duals and bucket fills. Comparisons are exact.
using Rational = mpq_class;

// Accepts "12", "-3", "0.01", "1/100". Throws std::invalid_argument otherwise.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form; integers are printed without a denominator.
std::string to_string(const Rational& value);

// Human-readable approximation, for display only.
std::string to_decimal(const Rational& value, int digits = 6);

}  // namespace qbdst
