#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace orbiqrr {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" into a canonical rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto is_digits = [](std::string_view v) {
        if (!v.empty() && (v.front() == '-' || v.front() == '+')) v.remove_prefix(1);
        if (v.empty()) return false;
        for (char c : v)
            if (c < '0' || c > '9') return false;
        return true;
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!num.empty() && num.front() == '+') num.erase(0, 1);
    if (!is_digits(num) || !is_digits(den) || den.front() == '-' || den.front() == '+')
        throw ParseError("malformed rational '" + s + "'");
    Rational r{Integer(num), Integer(den)};
    if (r.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    r.canonicalize();
    return r;
}

/// Canonical "p/q" text ("p" when q = 1).
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational factorial(unsigned n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

inline Rational binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return Rational(0);
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(b);
}

inline Rational power(const Rational& base, unsigned e) {
    Rational r(1);
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
}

/// Fractional part in [0, 1).
inline Rational frac(const Rational& r) {
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return r - Rational(fl);
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline long to_long(const Rational& r) {
    if (!is_integer(r)) throw InvalidParams("expected an integer, got " + to_string(r));
    return r.get_num().get_si();
}

} // namespace orbiqrr
