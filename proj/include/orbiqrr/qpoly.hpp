#pragma once

#include <utility>
#include <vector>

#include "rational.hpp"

namespace orbiqrr {

/// Dense univariate polynomial over Q, lowest degree first, no trailing zeros.
class QPoly {
public:
    QPoly() = default;
    explicit QPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {
        for (auto& x : c_) x.canonicalize();
        trim();
    }
    static QPoly constant(const Rational& a) { return QPoly(std::vector<Rational>{a}); }
    static QPoly monomial(const Rational& a, std::size_t deg) {
        std::vector<Rational> c(deg + 1);
        c[deg] = a;
        return QPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
    const Rational& lead() const { return c_.back(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }

    friend bool operator==(const QPoly&, const QPoly&) = default;

    QPoly& operator+=(const QPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    QPoly& operator-=(const QPoly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
    friend QPoly operator*(const QPoly& a, const QPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return QPoly(std::move(c));
    }
    QPoly scaled(const Rational& s) const {
        if (s == 0) return {};
        QPoly r = *this;
        for (auto& x : r.c_) x *= s;
        return r;
    }

    /// Quotient and remainder; `d` must be nonzero.
    friend std::pair<QPoly, QPoly> divmod(const QPoly& n, const QPoly& d) {
        if (d.is_zero()) throw NonInvertible("polynomial division by zero");
        if (n.degree() < d.degree()) return {QPoly{}, n};
        std::vector<Rational> r = n.c_;
        std::vector<Rational> q(n.c_.size() - d.c_.size() + 1);
        const Rational inv_lead = 1 / d.lead();
        for (int i = static_cast<int>(q.size()) - 1; i >= 0; --i) {
            Rational f = r[i + d.degree()] * inv_lead;
            q[i] = f;
            if (f == 0) continue;
            for (int j = 0; j <= d.degree(); ++j) r[i + j] -= f * d.c_[j];
        }
        r.resize(d.c_.size() - 1);
        return {QPoly(std::move(q)), QPoly(std::move(r))};
    }

    QPoly monic() const {
        if (is_zero()) return {};
        return scaled(1 / lead());
    }

    /// Monic gcd; gcd(0, 0) = 0.
    friend QPoly gcd(QPoly a, QPoly b) {
        while (!b.is_zero()) {
            auto r = divmod(a, b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    Rational eval(const Rational& x) const {
        Rational r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

} // namespace orbiqrr
