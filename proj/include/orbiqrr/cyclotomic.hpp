#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <vector>

#include "qpoly.hpp"

namespace orbiqrr {

inline int euler_phi(int n) {
    int result = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

/// The n-th cyclotomic polynomial, cached for the process lifetime.
inline const QPoly& cyclotomic_polynomial(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<QPoly>> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return *it->second;
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, computed without re-locking.
    std::map<int, QPoly> local;
    auto build = [&](auto&& self, int m) -> QPoly {
        if (auto it = cache.find(m); it != cache.end()) return *it->second;
        if (auto it = local.find(m); it != local.end()) return it->second;
        QPoly p = QPoly::monomial(1, m) - QPoly::constant(1);
        for (int d = 1; d < m; ++d)
            if (m % d == 0) p = divmod(p, self(self, d)).first;
        local.emplace(m, p);
        return p;
    };
    QPoly phi = build(build, n);
    for (auto& [m, p] : local)
        if (!cache.count(m)) cache.emplace(m, std::make_unique<QPoly>(p));
    return *cache.at(n);
}

/// Element of Q(zeta_N), zeta_N = exp(2 pi i / N), stored in the power basis
/// 1, zeta, ..., zeta^{phi(N)-1}. Rational elements always carry N = 1.
class Cyclo {
public:
    Cyclo() : c_{Rational(0)} {}
    Cyclo(const Rational& r) : c_{r} { c_[0].canonicalize(); }
    Cyclo(long v) : c_{Rational(v)} {}

    /// zeta_N^k, any integer k.
    static Cyclo root_of_unity(int n, long k) {
        if (n < 1) throw InvalidParams("root_of_unity: order must be >= 1");
        long e = ((k % n) + n) % n;
        return from_poly(n, QPoly::monomial(1, static_cast<std::size_t>(e)));
    }

    /// Reduces a polynomial in zeta_N modulo Phi_N.
    static Cyclo from_poly(int n, const QPoly& p) {
        Cyclo r;
        r.order_ = n;
        QPoly red = n == 1 ? QPoly::constant(p.eval(1)) : divmod(p, cyclotomic_polynomial(n)).second;
        r.c_.assign(static_cast<std::size_t>(euler_phi(n)), Rational(0));
        for (std::size_t i = 0; i < red.coeffs().size(); ++i) r.c_[i] = red.coeffs()[i];
        r.normalize();
        return r;
    }

    int order() const { return order_; }
    const std::vector<Rational>& coeffs() const { return c_; }
    QPoly as_poly() const { return QPoly(c_); }

    bool is_zero() const {
        for (auto& x : c_)
            if (x != 0) return false;
        return true;
    }
    bool is_rational() const { return order_ == 1; }
    const Rational& rational() const { return c_[0]; }

    /// Image in Q(zeta_m) for a multiple m of order().
    Cyclo lifted(int m) const {
        if (m == order_) return *this;
        if (m % order_ != 0) throw InvalidParams("cyclotomic lift to non-multiple order");
        if (order_ == 1) {
            Cyclo r;
            r.order_ = m;
            r.c_.assign(static_cast<std::size_t>(euler_phi(m)), Rational(0));
            r.c_[0] = c_[0];
            return r;
        }
        const int step = m / order_;
        std::vector<Rational> big(static_cast<std::size_t>(step) * c_.size());
        for (std::size_t a = 0; a < c_.size(); ++a) big[a * step] = c_[a];
        Cyclo r = from_poly(m, QPoly(std::move(big)));
        r.lift_to(m);
        return r;
    }

    /// Galois conjugate zeta -> zeta^k, gcd(k, N) = 1.
    Cyclo conjugate(int k) const {
        if (order_ == 1) return *this;
        std::vector<Rational> big(static_cast<std::size_t>(order_));
        for (std::size_t a = 0; a < c_.size(); ++a) {
            std::size_t e = (a * static_cast<std::size_t>(k)) % static_cast<std::size_t>(order_);
            big[e] += c_[a];
        }
        return from_poly(order_, QPoly(std::move(big)));
    }

    Cyclo inverse() const {
        if (is_zero()) throw NonInvertible("inverse of zero in cyclotomic field");
        if (order_ == 1) return Cyclo(1 / c_[0]);
        Cyclo others(1);
        for (int k = 2; k < order_; ++k)
            if (std::gcd(k, order_) == 1) others *= conjugate(k);
        Cyclo norm = *this * others;
        if (!norm.is_rational()) throw NonInvertible("cyclotomic norm is not rational");
        return others * Cyclo(1 / norm.rational());
    }

    Cyclo& operator+=(const Cyclo& o) { return combine(o, +1); }
    Cyclo& operator-=(const Cyclo& o) { return combine(o, -1); }
    Cyclo& operator*=(const Cyclo& o) {
        if (order_ == 1 && o.order_ == 1) {
            c_[0] *= o.c_[0];
            return *this;
        }
        if (o.order_ == 1) {
            for (auto& x : c_) x *= o.c_[0];
            normalize();
            return *this;
        }
        if (order_ == 1) {
            Rational s = c_[0];
            *this = o;
            for (auto& x : c_) x *= s;
            normalize();
            return *this;
        }
        const int m = std::lcm(order_, o.order_);
        Cyclo a = lifted(m), b = o.lifted(m);
        *this = from_poly(m, a.as_poly() * b.as_poly());
        return *this;
    }
    friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
    friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
    friend Cyclo operator*(Cyclo a, const Cyclo& b) { return a *= b; }
    Cyclo operator-() const {
        Cyclo r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend bool operator==(const Cyclo& a, const Cyclo& b) {
        if (a.order_ == b.order_) return a.c_ == b.c_;
        const int m = std::lcm(a.order_, b.order_);
        return a.lifted(m).c_ == b.lifted(m).c_;
    }

private:
    Cyclo& combine(const Cyclo& o, int sign) {
        if (order_ == o.order_) {
            for (std::size_t i = 0; i < c_.size(); ++i)
                sign > 0 ? c_[i] += o.c_[i] : c_[i] -= o.c_[i];
            normalize();
            return *this;
        }
        const int m = std::lcm(order_, o.order_);
        Cyclo a = lifted(m), b = o.lifted(m);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            sign > 0 ? a.c_[i] += b.c_[i] : a.c_[i] -= b.c_[i];
        a.normalize();
        *this = std::move(a);
        return *this;
    }

    // Keep the representation in Q(zeta_m) even when rational; used by lifted().
    void lift_to(int m) {
        if (order_ == m) return;
        std::vector<Rational> c(static_cast<std::size_t>(euler_phi(m)), Rational(0));
        for (std::size_t i = 0; i < c_.size(); ++i) c[i] = c_[i];
        c_ = std::move(c);
        order_ = m;
    }

    void normalize() {
        if (order_ == 1) return;
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return;
        Rational r = c_[0];
        c_.assign(1, r);
        order_ = 1;
    }

    int order_ = 1;
    std::vector<Rational> c_;
};

} // namespace orbiqrr
