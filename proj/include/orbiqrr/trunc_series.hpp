#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "scalar.hpp"

namespace orbiqrr {

using Multidegree = std::vector<int>;

inline int total_degree(const Multidegree& d) { return std::accumulate(d.begin(), d.end(), 0); }

inline std::string degree_string(const Multidegree& d) {
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s + ")";
}

/// Series sum_{d, n} c_{d,n} Q^d z^n truncated to |d| <= D and zmin <= n <= zmax.
///
/// Coefficients below zmin are zero. Coefficients above zmax are unknown unless the
/// series is upper-exact, in which case they are zero as well. Coefficients with |d| > D
/// are always unknown. T needs +, -, * and is_zero(); T() must act as zero.
template <class T>
class TruncSeries {
public:
    using Key = std::pair<Multidegree, int>;

    TruncSeries() = default;
    TruncSeries(int rank, int max_degree, int zmin, int zmax, bool upper_exact = false)
        : rank_(rank), D_(max_degree), zmin_(zmin), zmax_(zmax), exact_(upper_exact) {
        if (rank < 0 || max_degree < 0 || zmax < zmin) throw InvalidParams("invalid truncation bounds");
    }

    /// Series with a single constant coefficient.
    static TruncSeries constant(const T& c, int rank, int max_degree, int zmin = 0, int zmax = 0, bool upper_exact = true) {
        TruncSeries s(rank, max_degree, std::min(zmin, 0), std::max(zmax, 0), upper_exact);
        s.set(Multidegree(static_cast<std::size_t>(rank), 0), 0, c);
        return s;
    }

    int rank() const { return rank_; }
    int max_degree() const { return D_; }
    int zmin() const { return zmin_; }
    int zmax() const { return zmax_; }
    bool upper_exact() const { return exact_; }
    const std::map<Key, T>& coefficients() const { return c_; }

    bool known(const Multidegree& d, int n) const {
        return total_degree(d) <= D_ && (exact_ || n <= zmax_);
    }

    T at(const Multidegree& d, int n) const {
        check_rank(d);
        if (n < zmin_) return T();
        if (!known(d, n))
            throw TruncationTooNarrow("coefficient " + degree_string(d) + " z^" + std::to_string(n) + " lies outside the truncation");
        auto it = c_.find({d, n});
        return it == c_.end() ? T() : it->second;
    }
    T at(int d, int n) const { return at(Multidegree{d}, n); }

    void set(const Multidegree& d, int n, T v) {
        check_rank(d);
        if (total_degree(d) > D_ || n < zmin_ || n > zmax_)
            throw TruncationTooNarrow("cannot store " + degree_string(d) + " z^" + std::to_string(n) + " outside the truncation");
        if (v.is_zero())
            c_.erase({d, n});
        else
            c_[{d, n}] = std::move(v);
    }
    void set(int d, int n, T v) { set(Multidegree{d}, n, std::move(v)); }
    void add_to(const Multidegree& d, int n, const T& v) {
        auto it = c_.find({d, n});
        set(d, n, it == c_.end() ? v : it->second + v);
    }

    bool is_zero() const { return c_.empty(); }

    /// Applies f to every stored coefficient.
    template <class F>
    auto map(F f) const {
        using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
        TruncSeries<U> r(rank_, D_, zmin_, zmax_, exact_);
        for (auto& [k, v] : c_) r.set(k.first, k.second, f(v));
        return r;
    }

    /// Restricts the window; never widens it.
    TruncSeries truncated(int max_degree, int zmax) const {
        TruncSeries r(rank_, std::min(D_, max_degree), zmin_, std::max(zmin_, std::min(zmax_, zmax)), false);
        if (exact_ && zmax >= zmax_) r.exact_ = true, r.zmax_ = zmax_;
        for (auto& [k, v] : c_)
            if (total_degree(k.first) <= r.D_ && k.second <= r.zmax_) r.c_.emplace(k, v);
        return r;
    }

    /// Same series with a raised exact lower bound; all stored powers must be >= z.
    TruncSeries with_zmin(int z) const {
        for (auto& [k, v] : c_)
            if (k.second < z) throw InvalidParams("with_zmin: coefficient below new lower bound");
        TruncSeries r = *this;
        r.zmin_ = z;
        if (r.zmax_ < z) r.zmax_ = z;
        return r;
    }

    /// Multiplication by z^k.
    TruncSeries shifted(int k) const {
        TruncSeries r(rank_, D_, zmin_ + k, zmax_ + k, exact_);
        for (auto& [key, v] : c_) r.c_.emplace(Key{key.first, key.second + k}, v);
        return r;
    }

    TruncSeries operator-() const {
        TruncSeries r = *this;
        for (auto& [k, v] : r.c_) v = -v;
        return r;
    }
    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) { return combine(a, b, false); }
    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) { return combine(a, b, true); }
    TruncSeries& operator+=(const TruncSeries& b) { return *this = combine(*this, b, false); }
    TruncSeries& operator-=(const TruncSeries& b) { return *this = combine(*this, b, true); }

    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        check_compatible(a, b);
        const int zmin = a.zmin_ + b.zmin_;
        int zmax;
        bool exact = false;
        if (a.exact_ && b.exact_) {
            zmax = a.zmax_ + b.zmax_;
            exact = true;
        } else if (a.exact_) {
            zmax = b.zmax_ + a.zmin_;
        } else if (b.exact_) {
            zmax = a.zmax_ + b.zmin_;
        } else {
            zmax = std::min(a.zmax_ + b.zmin_, b.zmax_ + a.zmin_);
        }
        TruncSeries r(a.rank_, std::min(a.D_, b.D_), zmin, std::max(zmin, zmax), exact);
        if (zmax < zmin) r.exact_ = false;
        for (auto& [ka, va] : a.c_) {
            if (total_degree(ka.first) > r.D_) continue;
            for (auto& [kb, vb] : b.c_) {
                const int n = ka.second + kb.second;
                if (n > r.zmax_) continue;
                Multidegree d(ka.first);
                for (std::size_t i = 0; i < d.size(); ++i) d[i] += kb.first[i];
                if (total_degree(d) > r.D_) continue;
                auto it = r.c_.find({d, n});
                T prod = va * vb;
                if (it == r.c_.end()) {
                    if (!prod.is_zero()) r.c_.emplace(Key{std::move(d), n}, std::move(prod));
                } else {
                    it->second = it->second + prod;
                    if (it->second.is_zero()) r.c_.erase(it);
                }
            }
        }
        return r;
    }
    TruncSeries& operator*=(const TruncSeries& b) { return *this = *this * b; }

    /// Coefficient-wise multiplication by a ring element on the right.
    template <class S>
    TruncSeries scaled(const S& s) const {
        TruncSeries r(rank_, D_, zmin_, zmax_, exact_);
        for (auto& [k, v] : c_) {
            T w = v * s;
            if (!w.is_zero()) r.c_.emplace(k, std::move(w));
        }
        return r;
    }

    /// Structural equality on the common known window.
    friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
        if (a.rank_ != b.rank_ || a.D_ != b.D_ || a.zmin_ != b.zmin_ || a.zmax_ != b.zmax_ || a.exact_ != b.exact_) return false;
        if (a.c_.size() != b.c_.size()) return false;
        for (auto ia = a.c_.begin(), ib = b.c_.begin(); ia != a.c_.end(); ++ia, ++ib)
            if (ia->first != ib->first || !(ia->second == ib->second)) return false;
        return true;
    }

    /// True when a - b vanishes wherever both are known.
    friend bool agree(const TruncSeries& a, const TruncSeries& b) {
        TruncSeries diff = a - b;
        return diff.is_zero();
    }

private:
    void check_rank(const Multidegree& d) const {
        if (static_cast<int>(d.size()) != rank_) throw InvalidParams("Novikov multidegree has wrong rank");
    }
    static void check_compatible(const TruncSeries& a, const TruncSeries& b) {
        if (a.rank_ != b.rank_) throw InvalidParams("Novikov rank mismatch");
    }
    static TruncSeries combine(const TruncSeries& a, const TruncSeries& b, bool subtract) {
        check_compatible(a, b);
        int zmax;
        bool exact = a.exact_ && b.exact_;
        if (exact)
            zmax = std::max(a.zmax_, b.zmax_);
        else if (a.exact_)
            zmax = b.zmax_;
        else if (b.exact_)
            zmax = a.zmax_;
        else
            zmax = std::min(a.zmax_, b.zmax_);
        const int zmin = std::min(a.zmin_, b.zmin_);
        TruncSeries r(a.rank_, std::min(a.D_, b.D_), zmin, std::max(zmin, zmax), exact);
        auto keep = [&](const Key& k) { return total_degree(k.first) <= r.D_ && k.second <= r.zmax_; };
        for (auto& [k, v] : a.c_)
            if (keep(k)) r.c_.emplace(k, v);
        for (auto& [k, v] : b.c_) {
            if (!keep(k)) continue;
            auto it = r.c_.find(k);
            if (it == r.c_.end())
                r.c_.emplace(k, subtract ? -v : v);
            else {
                it->second = subtract ? it->second - v : it->second + v;
                if (it->second.is_zero()) r.c_.erase(it);
            }
        }
        return r;
    }

    int rank_ = 1;
    int D_ = 0;
    int zmin_ = 0;
    int zmax_ = 0;
    bool exact_ = false;
    std::map<Key, T> c_;
};

using ScalarSeries = TruncSeries<Scalar>;

/// Multiplicative inverse of a series whose z^0 Q^0 coefficient is a unit and which has
/// no negative z powers.
inline ScalarSeries series_invert(const ScalarSeries& a) {
    const Multidegree zero(static_cast<std::size_t>(a.rank()), 0);
    for (auto& [k, v] : a.coefficients())
        if (k.second < 0) throw NonUnitConstantTerm("series has negative z powers");
    Scalar a0 = a.zmin() <= 0 ? a.at(zero, 0) : Scalar();
    if (a0.is_zero()) throw NonUnitConstantTerm("constant coefficient is zero");
    Scalar inv0;
    try {
        inv0 = a0.inverse();
    } catch (const NonInvertible&) {
        throw NonUnitConstantTerm("constant coefficient " + a0.to_string() + " is not invertible");
    }
    // a = a0 (1 + x) with x of positive order
    ScalarSeries x = a.with_zmin(0).scaled(inv0);
    x.set(zero, 0, Scalar());
    const bool z_free = std::all_of(a.coefficients().begin(), a.coefficients().end(),
                                    [](auto& kv) { return kv.first.second == 0; });
    const int zmax = z_free && a.upper_exact() ? 0 : a.zmax();
    ScalarSeries result(a.rank(), a.max_degree(), 0, std::max(0, zmax), z_free && a.upper_exact());
    ScalarSeries term = ScalarSeries::constant(Scalar(1), a.rank(), a.max_degree());
    result = result + term;
    const int steps = a.max_degree() + std::max(0, zmax);
    for (int k = 1; k <= steps && !term.is_zero(); ++k) {
        term = -(term * x);
        result = result + term;
    }
    if (!z_free || !a.upper_exact()) result = result.truncated(a.max_degree(), a.zmax());
    return result.scaled(inv0);
}

/// exp(a) for a z-free series with vanishing Q^0 coefficient.
inline ScalarSeries series_exp(const ScalarSeries& a) {
    const Multidegree zero(static_cast<std::size_t>(a.rank()), 0);
    for (auto& [k, v] : a.coefficients()) {
        if (k.second != 0) throw InvalidParams("series_exp: series depends on z");
        if (k.first == zero) throw InvalidParams("series_exp: nonzero constant term " + v.to_string());
    }
    ScalarSeries x = a.truncated(a.max_degree(), 0).with_zmin(0);
    ScalarSeries result = ScalarSeries::constant(Scalar(1), a.rank(), a.max_degree());
    ScalarSeries term = result;
    for (int k = 1; k <= a.max_degree() && !term.is_zero(); ++k) {
        term = (term * x).scaled(Scalar(Rational(1, k)));
        result += term;
    }
    return result;
}

/// lambda := 0 applied coefficient-wise; errors name the offending index.
inline ScalarSeries nonequiv_limit(const ScalarSeries& a) {
    ScalarSeries r(a.rank(), a.max_degree(), a.zmin(), a.zmax(), a.upper_exact());
    for (auto& [k, v] : a.coefficients()) {
        try {
            r.set(k.first, k.second, v.nonequiv_limit());
        } catch (const PoleAtZero& e) {
            throw PoleAtZero(std::string(e.what()) + " at Q^" + degree_string(k.first) + " z^" + std::to_string(k.second));
        } catch (const LogObstruction& e) {
            throw LogObstruction(std::string(e.what()) + " at Q^" + degree_string(k.first) + " z^" + std::to_string(k.second));
        }
    }
    return r;
}

} // namespace orbiqrr
