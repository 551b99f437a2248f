#pragma once

#include <mutex>
#include <vector>

#include "rational.hpp"

namespace orbiqrr {

/// Bernoulli number B_m with B_1 = -1/2, memoized.
inline Rational bernoulli_number(unsigned m) {
    static std::mutex mu;
    static std::vector<Rational> memo{Rational(1)};
    std::lock_guard<std::mutex> lock(mu);
    // B_{n+1}(1) = B_{n+1}(0)
    for (unsigned n = static_cast<unsigned>(memo.size()); n <= m; ++n) {
        Rational s(0);
        for (unsigned k = 0; k < n; ++k) s += Rational(binomial(n + 1, k)) * memo[k];
        memo.push_back(-s / Rational(n + 1));
    }
    return memo[m];
}

/// B_m(x) as a dense coefficient list, lowest degree first.
class BernoulliPoly {
public:
    explicit BernoulliPoly(unsigned m) : m_(m), c_(m + 1) {
        for (unsigned k = 0; k <= m; ++k) c_[m - k] = Rational(binomial(m, k)) * bernoulli_number(k);
    }
    unsigned degree() const { return m_; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational operator()(const Rational& x) const {
        Rational r(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

private:
    unsigned m_;
    std::vector<Rational> c_;
};

inline Rational bernoulli_value(unsigned m, const Rational& x) { return BernoulliPoly(m)(x); }

} // namespace orbiqrr
