#pragma once

#include <gmpxx.h>

#include <string>

namespace lbex {

/// A decimal literal kept exactly as written, alongside the binary64 it
/// rounds to. Model coefficients and signal parameters are Decimals so that
/// serialization round-trips byte-for-byte and exact-rational arithmetic can
/// start from the literal rather than from the double.
struct Decimal {
    std::string text;    // as written, e.g. "-0.0048196"
    double value = 0.0;  // nearest binary64 to text

    static Decimal parse(const std::string& text);  // throws Error(Syntax)

    mpq_class exact() const;  // the literal as an exact rational

    bool operator==(const Decimal&) const = default;
};

/// Exact rational value of a decimal literal (with optional exponent).
mpq_class decimal_to_rational(const std::string& text);

/// Round-trip-exact binary64 formatting: 17 significant digits.
std::string format_double(double x);

/// Strict double parse; the whole string must be consumed.
double parse_double(const std::string& s);

}  // namespace lbex
