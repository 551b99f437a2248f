#pragma once

// Classical mirror computation for Calabi-Yau threefold complete intersections in P^n:
// hypergeometric periods, the mirror map and the Yukawa coupling, with plain rational
// power series. Shares no code with the library's I-function pipeline.

#include <map>
#include <vector>

#include "orbiqrr/rational.hpp"

namespace orbiqrr::oracle {

using Series = std::vector<Rational>;  // coefficients of x^0 .. x^M

inline Series mul(const Series& a, const Series& b) {
    Series c(a.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < c.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

inline Series inv(const Series& a) {
    Series c(a.size(), Rational(0));
    c[0] = 1 / a[0];
    for (std::size_t k = 1; k < a.size(); ++k) {
        Rational s(0);
        for (std::size_t j = 1; j <= k; ++j) s += a[j] * c[k - j];
        c[k] = -s / a[0];
    }
    return c;
}

/// exp(a) for a[0] = 0, via c' = a' c.
inline Series exp(const Series& a) {
    Series c(a.size(), Rational(0));
    c[0] = 1;
    for (std::size_t k = 1; k < a.size(); ++k) {
        Rational s(0);
        for (std::size_t j = 1; j <= k; ++j) s += Rational(static_cast<long>(j)) * a[j] * c[k - j];
        c[k] = s / Rational(static_cast<long>(k));
    }
    return c;
}

/// x d/dx
inline Series theta(const Series& a) {
    Series c = a;
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= Rational(static_cast<long>(k));
    return c;
}

/// a(b(x)) for b[0] = 0.
inline Series compose(const Series& a, const Series& b) {
    Series out(a.size(), Rational(0)), pw(a.size(), Rational(0));
    pw[0] = 1;
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += a[k] * pw[i];
        pw = mul(pw, b);
    }
    return out;
}

/// Compositional inverse of q(x) = x + O(x^2).
inline Series revert(const Series& q) {
    Series x(q.size(), Rational(0));
    if (q.size() > 1) x[1] = 1;
    for (std::size_t k = 2; k < q.size(); ++k) {
        Series c = compose(q, x);
        x[k] -= c[k];
    }
    return x;
}

inline Rational harmonic(long n) {
    Rational h(0);
    for (long k = 1; k <= n; ++k) h += Rational(1, k);
    return h;
}

struct Periods {
    Series w0;     // fundamental period
    Series ratio;  // w1 / w0, where the log period is w0 log x + w1
    Rational prod_a;
    Rational prod_aa;
};

/// Periods of the complete intersection of degrees a in P^n, with sum a = n + 1.
inline Periods periods(const std::vector<long>& a, int n, int M) {
    Series w0(static_cast<std::size_t>(M + 1)), w1(static_cast<std::size_t>(M + 1));
    Rational prod_a(1), prod_aa(1);
    for (long aj : a) {
        prod_a *= Rational(aj);
        Rational p(1);
        for (long k = 0; k < aj; ++k) p *= Rational(aj);
        prod_aa *= p;
    }
    for (int d = 0; d <= M; ++d) {
        Rational c(1), h(0);
        for (long aj : a) {
            c *= factorial(static_cast<unsigned>(aj * d));
            h += Rational(aj) * harmonic(aj * d);
        }
        for (int k = 0; k <= n; ++k) c /= factorial(static_cast<unsigned>(d));
        h -= Rational(n + 1) * harmonic(d);
        w0[static_cast<std::size_t>(d)] = c;
        w1[static_cast<std::size_t>(d)] = c * h;
    }
    return {w0, mul(w1, inv(w0)), prod_a, prod_aa};
}

/// N_d for d = 1..M from the Yukawa coupling in the flat coordinate.
inline std::map<int, Rational> yukawa_invariants(const std::vector<long>& a, int n, int M) {
    const Periods P = periods(a, n, M);
    Series qx = exp(P.ratio);  // q = x exp(w1 / w0)
    qx.insert(qx.begin(), Rational(0));
    qx.pop_back();
    Series dt = theta(P.ratio);  // x dt/dx = 1 + theta(w1 / w0)
    dt[0] += 1;
    Series one_minus(static_cast<std::size_t>(M + 1), Rational(0));
    one_minus[0] = 1;
    if (M >= 1) one_minus[1] = -P.prod_aa;
    Series K = mul(inv(mul(one_minus, mul(P.w0, P.w0))), inv(mul(dt, mul(dt, dt))));
    for (auto& c : K) c *= P.prod_a;
    const Series Kq = compose(K, revert(qx));
    std::map<int, Rational> N;
    for (int d = 1; d <= M; ++d) {
        Rational v = Kq[static_cast<std::size_t>(d)] / Rational(d * d * d);
        v.canonicalize();
        N[d] = v;
    }
    return N;
}

} // namespace orbiqrr::oracle
