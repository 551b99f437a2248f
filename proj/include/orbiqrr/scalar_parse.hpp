#pragma once

#include <cctype>
#include <string>

#include "scalar.hpp"

namespace orbiqrr {

namespace detail {

/// Recursive-descent reader for the syntax printed by Scalar::to_string:
/// sums and products of rationals, lambda, lambda^(p/q), ell, zetaN, with parentheses.
class ScalarReader {
public:
    explicit ScalarReader(const std::string& text) : s_(text) {}

    Scalar read() {
        Scalar v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("cannot parse scalar '" + s_ + "' at offset " + std::to_string(pos_) + ": " + what);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool word(const std::string& w) {
        skip();
        if (s_.compare(pos_, w.size(), w) != 0) return false;
        pos_ += w.size();
        return true;
    }
    long integer() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a number");
        return std::stol(s_.substr(start, pos_ - start));
    }
    Rational exponent() {
        if (eat('(')) {
            Rational sign = eat('-') ? Rational(-1) : Rational(1);
            Rational e(integer());
            if (eat('/')) e /= Rational(integer());
            if (!eat(')')) fail("expected ')'");
            e *= sign;
            e.canonicalize();
            return e;
        }
        Rational sign = eat('-') ? Rational(-1) : Rational(1);
        return sign * Rational(integer());
    }

    Scalar expr() {
        Scalar v = term();
        for (;;) {
            if (eat('+'))
                v += term();
            else if (eat('-'))
                v -= term();
            else
                return v;
        }
    }
    Scalar term() {
        Scalar v = factor();
        for (;;) {
            if (eat('*'))
                v *= factor();
            else if (eat('/'))
                v /= factor();
            else
                return v;
        }
    }
    Scalar factor() {
        if (eat('-')) return -factor();
        if (eat('+')) return factor();
        skip();
        if (word("lambda")) {
            Rational e(1);
            if (eat('^')) e = exponent();
            return Scalar::lambda(e);
        }
        Scalar base = primary();
        if (eat('^')) {
            Rational e = exponent();
            if (!is_integer(e)) fail("fractional power of a value other than lambda");
            return base.pow(to_long(e));
        }
        return base;
    }
    Scalar primary() {
        if (eat('(')) {
            Scalar v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (word("ell")) return Scalar::ell();
        if (word("zeta")) return Scalar::root_of_unity(static_cast<int>(integer()), 1);
        return Scalar(Rational(integer()));
    }

    std::string s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Scalar parse_scalar(const std::string& text) { return detail::ScalarReader(text).read(); }

} // namespace orbiqrr
