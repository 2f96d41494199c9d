#include "core/numeric.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "core/error.hpp"

namespace lbex {

namespace {

// Accepts [+-]? digits [. digits?] [eE [+-]? digits], or [+-]? . digits ...
// Rejects inf/nan/hex: coefficients must be plain decimal literals.
bool scan_decimal(const std::string& s) {
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    size_t int_digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        ++i;
        ++int_digits;
    }
    size_t frac_digits = 0;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
            ++frac_digits;
        }
    }
    if (int_digits + frac_digits == 0) return false;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        size_t exp_digits = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
            ++exp_digits;
        }
        if (exp_digits == 0) return false;
    }
    return i == s.size();
}

}  // namespace

Decimal Decimal::parse(const std::string& text) {
    if (!scan_decimal(text)) {
        fail(ErrorKind::Syntax, "not a decimal literal: '" + text + "'");
    }
    Decimal d;
    d.text = text;
    d.value = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(d.value)) {
        fail(ErrorKind::Syntax, "decimal literal out of binary64 range: '" + text + "'");
    }
    return d;
}

mpq_class Decimal::exact() const { return decimal_to_rational(text); }

mpq_class decimal_to_rational(const std::string& text) {
    if (!scan_decimal(text)) {
        fail(ErrorKind::Syntax, "not a decimal literal: '" + text + "'");
    }
    size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    long scale = 0;  // value = digits * 10^scale
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        digits.push_back(text[i++]);
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            digits.push_back(text[i++]);
            --scale;
        }
    }
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        scale += std::strtol(text.c_str() + i + 1, nullptr, 10);
        i = text.size();
    }
    if (digits.empty()) digits = "0";

    mpz_class mantissa(digits, 10);
    if (negative) mantissa = -mantissa;
    mpq_class value(mantissa);
    if (scale != 0) {
        mpz_class pow10;
        mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
        if (scale > 0) {
            value *= mpq_class(pow10);
        } else {
            value /= mpq_class(pow10);
        }
    }
    value.canonicalize();
    return value;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double parse_double(const std::string& s) {
    if (s.empty()) fail(ErrorKind::Syntax, "empty number");
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size()) {
        fail(ErrorKind::Syntax, "trailing characters in number: '" + s + "'");
    }
    return v;
}

}  // namespace lbex
