#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "correlators.hpp"
#include "loopops.hpp"

namespace orbiqrr {

/// Sparse exponent vector: variable index -> positive power.
using Exponents = std::map<int, int>;

inline int total_degree(const Exponents& e) {
    int n = 0;
    for (auto& [v, p] : e) n += p;
    return n;
}

inline Exponents add_exponents(Exponents a, const Exponents& b) {
    for (auto& [v, p] : b) a[v] += p;
    return a;
}

/// Variables q_k^alpha, k = 0..K, flattened as k * nbasis + alpha.
struct FockIndex {
    std::size_t nbasis = 1;
    int K = 0;

    int var(int k, int alpha) const {
        if (k < 0 || k > K || alpha < 0 || alpha >= static_cast<int>(nbasis))
            throw IndexOverflow("variable q_" + std::to_string(k) + "^" + std::to_string(alpha) + " outside K=" + std::to_string(K));
        return k * static_cast<int>(nbasis) + alpha;
    }
    int level(int v) const { return v / static_cast<int>(nbasis); }
    int alpha(int v) const { return v % static_cast<int>(nbasis); }
    int count() const { return (K + 1) * static_cast<int>(nbasis); }
    std::string name(int v) const {
        std::string s = "q" + std::to_string(level(v));
        if (nbasis > 1) s += "^" + std::to_string(alpha(v));
        return s;
    }
    friend bool operator==(const FockIndex&, const FockIndex&) = default;
};

// ---------------------------------------------------------------------------

/// Truncated polynomial in the q-variables with coefficients Laurent in hbar.
/// Terms of total degree above `cutoff` are unknown; hbar powers stay in [hbar_min, hbar_max].
class FockPolynomial {
public:
    using Key = std::pair<int, Exponents>;  // (hbar power, monomial)

    FockPolynomial() = default;
    FockPolynomial(FockIndex idx, int cutoff, int hbar_min = -1, int hbar_max = 1)
        : idx_(idx), cutoff_(cutoff), hmin_(hbar_min), hmax_(hbar_max) {}

    static FockPolynomial variable(FockIndex idx, int k, int alpha, int cutoff) {
        FockPolynomial p(idx, cutoff);
        p.add(0, {{idx.var(k, alpha), 1}}, Scalar(1));
        return p;
    }

    const FockIndex& index() const { return idx_; }
    int cutoff() const { return cutoff_; }
    int hbar_min() const { return hmin_; }
    int hbar_max() const { return hmax_; }
    const std::map<Key, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(int hbar, const Exponents& mono, const Scalar& c) {
        if (c.is_zero()) return;
        if (hbar < hmin_ || hbar > hmax_)
            throw TruncationTooNarrow("hbar^" + std::to_string(hbar) + " outside window [" + std::to_string(hmin_) + ", " +
                                      std::to_string(hmax_) + "]");
        if (total_degree(mono) > cutoff_) return;
        auto [it, fresh] = terms_.try_emplace({hbar, mono}, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    Scalar coefficient(int hbar, const Exponents& mono) const {
        auto it = terms_.find({hbar, mono});
        return it == terms_.end() ? Scalar() : it->second;
    }
    /// Lowest total degree present (INT_MAX for zero).
    int low_degree() const {
        int lo = INT_MAX;
        for (auto& [k, c] : terms_) lo = std::min(lo, total_degree(k.second));
        return lo;
    }
    /// Part of total degree <= d.
    FockPolynomial through_degree(int d) const {
        FockPolynomial r(idx_, std::min(d, cutoff_), hmin_, hmax_);
        for (auto& [k, c] : terms_)
            if (total_degree(k.second) <= d) r.terms_.emplace(k, c);
        return r;
    }
    FockPolynomial with_cutoff(int c) const { return through_degree(c).widened(c); }

    FockPolynomial& operator+=(const FockPolynomial& o) {
        check_compatible(o);
        cutoff_ = std::min(cutoff_, o.cutoff_);
        std::map<Key, Scalar> kept;
        for (auto& [k, c] : terms_)
            if (total_degree(k.second) <= cutoff_) kept.emplace(k, c);
        terms_ = std::move(kept);
        for (auto& [k, c] : o.terms_) add(k.first, k.second, c);
        return *this;
    }
    FockPolynomial& operator-=(const FockPolynomial& o) { return *this += o * Scalar(-1); }
    friend FockPolynomial operator+(FockPolynomial a, const FockPolynomial& b) { return a += b; }
    friend FockPolynomial operator-(FockPolynomial a, const FockPolynomial& b) { return a -= b; }
    friend FockPolynomial operator*(FockPolynomial a, const Scalar& s) {
        if (s.is_zero()) {
            a.terms_.clear();
            return a;
        }
        for (auto& [k, c] : a.terms_) c *= s;
        return a;
    }
    friend FockPolynomial operator*(const FockPolynomial& a, const FockPolynomial& b) {
        a.check_compatible(b);
        const int la = a.low_degree(), lb = b.low_degree();
        int cut = std::min(lb == INT_MAX ? INT_MAX : a.cutoff_ + lb, la == INT_MAX ? INT_MAX : b.cutoff_ + la);
        if (cut == INT_MAX) cut = a.cutoff_ + b.cutoff_;
        FockPolynomial r(a.idx_, cut, a.hmin_, a.hmax_);
        for (auto& [ka, ca] : a.terms_)
            for (auto& [kb, cb] : b.terms_) {
                Exponents e = add_exponents(ka.second, kb.second);
                if (total_degree(e) <= cut) r.add(ka.first + kb.first, e, ca * cb);
            }
        return r;
    }
    /// Multiplication by hbar^h q^e (known degrees shift up by |e|).
    FockPolynomial shifted(int h, const Exponents& e) const {
        FockPolynomial r(idx_, cutoff_ + total_degree(e), hmin_, hmax_);
        for (auto& [k, c] : terms_) r.add(k.first + h, add_exponents(k.second, e), c);
        return r;
    }
    FockPolynomial derivative(int v) const {
        FockPolynomial r(idx_, cutoff_ - 1, hmin_, hmax_);
        for (auto& [k, c] : terms_) {
            auto it = k.second.find(v);
            if (it == k.second.end()) continue;
            Exponents e = k.second;
            const int p = it->second;
            if (p == 1)
                e.erase(v);
            else
                e[v] = p - 1;
            r.add(k.first, e, c * Scalar(Rational(p)));
        }
        return r;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [k, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += c.to_string();
            if (k.first != 0) s += "*hbar^" + std::to_string(k.first);
            for (auto& [v, p] : k.second) s += "*" + idx_.name(v) + (p > 1 ? "^" + std::to_string(p) : "");
        }
        return s;
    }

private:
    FockPolynomial widened(int c) const {
        FockPolynomial r = *this;
        r.cutoff_ = c;
        return r;
    }
    void check_compatible(const FockPolynomial& o) const {
        if (!(idx_ == o.idx_)) throw IndexOverflow("Fock polynomials over different variable sets");
    }

    FockIndex idx_;
    int cutoff_ = 0;
    int hmin_ = -1, hmax_ = 1;
    std::map<Key, Scalar> terms_;
};

// ---------------------------------------------------------------------------

/// Normal-ordered element of the Weyl algebra: sum of c * hbar^h * q^a * d^b
/// with all derivatives to the right.
class WeylElement {
public:
    struct Key {
        int hbar = 0;
        Exponents q, d;
        friend auto operator<=>(const Key&, const Key&) = default;
    };

    WeylElement() = default;
    static WeylElement constant(const Scalar& c) {
        WeylElement w;
        w.add({0, {}, {}}, c);
        return w;
    }
    static WeylElement monomial(int hbar, Exponents q, Exponents d, const Scalar& c) {
        WeylElement w;
        w.add({hbar, std::move(q), std::move(d)}, c);
        return w;
    }

    const std::map<Key, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_scalar() const {
        return std::all_of(terms_.begin(), terms_.end(), [](auto& kv) { return kv.first.q.empty() && kv.first.d.empty() && kv.first.hbar == 0; });
    }
    Scalar constant_term() const {
        auto it = terms_.find(Key{});
        return it == terms_.end() ? Scalar() : it->second;
    }

    void add(const Key& k, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    WeylElement& operator+=(const WeylElement& o) {
        for (auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    friend WeylElement operator+(WeylElement a, const WeylElement& b) { return a += b; }
    friend WeylElement operator*(WeylElement a, const Scalar& s) {
        WeylElement r;
        for (auto& [k, c] : a.terms_) r.add(k, c * s);
        return r;
    }
    friend WeylElement operator-(const WeylElement& a, const WeylElement& b) { return a + b * Scalar(-1); }

    friend WeylElement operator*(const WeylElement& x, const WeylElement& y) {
        WeylElement r;
        for (auto& [kx, cx] : x.terms_)
            for (auto& [ky, cy] : y.terms_) reorder(kx, ky, cx * cy, r);
        return r;
    }

    /// Keeps the terms whose variables all satisfy keep(v).
    template <class Pred>
    WeylElement filtered(Pred keep) const {
        WeylElement r;
        for (auto& [k, c] : terms_) {
            bool ok = true;
            for (auto& [v, p] : k.q) ok = ok && keep(v);
            for (auto& [v, p] : k.d) ok = ok && keep(v);
            if (ok) r.terms_.emplace(k, c);
        }
        return r;
    }

    friend bool operator==(const WeylElement&, const WeylElement&) = default;

private:
    // (q^a d^b)(q^c d^e) = sum_k prod_v C(b_v, k_v) c_v!/(c_v - k_v)! q^{a+c-k} d^{b-k+e}
    static void reorder(const Key& x, const Key& y, const Scalar& c, WeylElement& out) {
        std::vector<std::pair<int, int>> shared;  // variable, max contraction
        for (auto& [v, p] : x.d) {
            auto it = y.q.find(v);
            if (it != y.q.end()) shared.push_back({v, std::min(p, it->second)});
        }
        std::vector<int> k(shared.size(), 0);
        for (;;) {
            Scalar w = c;
            Exponents q = x.q, d = y.d;
            for (auto& [v, p] : y.q) q[v] += p;
            for (auto& [v, p] : x.d) d[v] += p;
            for (std::size_t i = 0; i < shared.size(); ++i) {
                const int v = shared[i].first, kv = k[i];
                if (kv == 0) continue;
                const int b = x.d.at(v), cc = y.q.at(v);
                Rational f = Rational(binomial(static_cast<unsigned>(b), static_cast<unsigned>(kv)));
                for (int j = 0; j < kv; ++j) f *= Rational(cc - j);
                w *= Scalar(f);
                if ((q[v] -= kv) == 0) q.erase(v);
                if ((d[v] -= kv) == 0) d.erase(v);
            }
            out.add({x.hbar + y.hbar, q, d}, w);
            std::size_t i = 0;
            while (i < shared.size() && ++k[i] > shared[i].second) k[i++] = 0;
            if (i == shared.size()) break;
        }
    }

    std::map<Key, Scalar> terms_;
};

inline WeylElement commutator(const WeylElement& a, const WeylElement& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------

enum class FockShape { QQ, QD, DD, Scalar, Other };

inline FockShape shape_of(const WeylElement::Key& k) {
    const int nq = total_degree(k.q), nd = total_degree(k.d);
    if (k.hbar == -1 && nq == 2 && nd == 0) return FockShape::QQ;
    if (k.hbar == 0 && nq == 1 && nd == 1) return FockShape::QD;
    if (k.hbar == 1 && nq == 0 && nd == 2) return FockShape::DD;
    if (k.hbar == 0 && nq == 0 && nd == 0) return FockShape::Scalar;
    return FockShape::Other;
}

/// Quadratic differential operator on the Fock space with variables up to level K.
struct FockOperator {
    FockIndex index;
    WeylElement terms;
    bool truncated = false;  // an infinite sum was cut at level K

    bool has_only_quantization_shapes() const {
        for (auto& [k, c] : terms.terms()) {
            const FockShape s = shape_of(k);
            if (s == FockShape::Other || s == FockShape::Scalar) return false;
        }
        return true;
    }
    friend FockOperator operator+(FockOperator a, const FockOperator& b) {
        if (!(a.index == b.index)) throw IndexOverflow("operators over different variable sets");
        a.terms += b.terms;
        a.truncated = a.truncated || b.truncated;
        return a;
    }

    std::string to_string() const {
        if (terms.is_zero()) return "0";
        std::string s;
        for (auto& [k, c] : terms.terms()) {
            if (!s.empty()) s += " + ";
            s += c.to_string();
            if (k.hbar != 0) s += "*hbar^" + std::to_string(k.hbar);
            for (auto& [v, p] : k.q) s += "*" + index.name(v) + (p > 1 ? "^" + std::to_string(p) : "");
            for (auto& [v, p] : k.d) s += "*d/d" + index.name(v) + (p > 1 ? "^" + std::to_string(p) : "");
        }
        return s;
    }
};

// ---------------------------------------------------------------------------
// Quantization of B z^m.

namespace detail {

inline void require_symplectic(const Matrix& G, const Matrix& B, int m) {
    if (!is_infinitesimally_symplectic(G, B, m))
        throw NotInfinitesimallySymplectic("B z^" + std::to_string(m) + " is not infinitesimally symplectic: B* != (-1)^(m+1) B");
}

inline FockIndex fock_index(const Matrix& G, int m, int K) {
    if (K < std::abs(m)) throw TruncationTooNarrow("level cutoff K=" + std::to_string(K) + " below |m|=" + std::to_string(std::abs(m)));
    return FockIndex{G.size(), K};
}

}  // namespace detail

/// Explicit operator formula for B z^m in Darboux coordinates, sums cut at level K.
inline FockOperator quantize_monomial(const Matrix& G, const Matrix& B, int m, int K) {
    detail::require_symplectic(G, B, m);
    FockOperator op{detail::fock_index(G, m, K), {}, true};
    const FockIndex& ix = op.index;
    const int n = static_cast<int>(G.size());
    const auto entry = [](const Matrix& M, int a, int b) { return M[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; };

    for (int k = std::max(0, -m); k <= K && k + m <= K; ++k)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                op.terms.add({0, {{ix.var(k, b), 1}}, {{ix.var(k + m, a), 1}}}, -entry(B, a, b));

    if (m < 0) {
        const Matrix lowered = G * B;
        for (int k = 0; k <= -m - 1; ++k)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const Scalar c = entry(lowered, a, b) * Scalar(Rational((k + m) % 2 ? -1 : 1, 2));
                    op.terms.add({-1, add_exponents({{ix.var(k, b), 1}}, {{ix.var(-1 - k - m, a), 1}}), {}}, c);
                }
    } else if (m > 0) {
        const Matrix raised = B * inverse(G);
        for (int k = 0; k <= m - 1; ++k)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const Scalar c = entry(raised, a, b) * Scalar(Rational(k % 2 ? -1 : 1, 2));
                    op.terms.add({1, {}, add_exponents({{ix.var(k, b), 1}}, {{ix.var(m - 1 - k, a), 1}})}, c);
                }
    }
    return op;
}

inline FockOperator quantize_monomial(const TargetModel& t, const Matrix& B, int m, int K) { return quantize_monomial(gram_matrix(t), B, m, K); }

/// Darboux coordinate: q_k^alpha (coefficient of phi_alpha z^k) or p_k^alpha
/// (coefficient of phi^alpha (-z)^{-1-k}).
struct DarbouxVar {
    bool momentum = false;
    int k = 0;
    int alpha = 0;
    friend auto operator<=>(const DarbouxVar&, const DarbouxVar&) = default;
};

/// Quadratic polynomial in Darboux coordinates, keyed by the unordered pair (x <= y).
using QuadraticForm = std::map<std::pair<DarbouxVar, DarbouxVar>, Scalar>;

/// h(f) = Omega(A f, f) / 2 for A = B z^m, restricted to coordinates of level <= K.
inline QuadraticForm quadratic_hamiltonian(const Matrix& G, const Matrix& B, int m, int K) {
    detail::require_symplectic(G, B, m);
    const std::size_t n = G.size();
    const Matrix Ginv = inverse(G);
    struct Vec {
        DarbouxVar var;
        std::vector<Scalar> v;
        int zpow;
    };
    std::vector<Vec> basis;
    for (int k = 0; k <= K; ++k)
        for (std::size_t a = 0; a < n; ++a) {
            std::vector<Scalar> e(n);
            e[a] = Scalar(1);
            basis.push_back({{false, k, static_cast<int>(a)}, e, k});
            std::vector<Scalar> dual(n);
            const Scalar sign((k + 1) % 2 ? -1 : 1);
            for (std::size_t b = 0; b < n; ++b) dual[b] = Ginv[a][b] * sign;
            basis.push_back({{true, k, static_cast<int>(a)}, dual, -1 - k});
        }
    const auto apply_B = [&](const std::vector<Scalar>& v) {
        std::vector<Scalar> r(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) r[a] += B[a][b] * v[b];
        return r;
    };
    QuadraticForm h;
    for (const Vec& x : basis) {
        const std::vector<Scalar> Ax = apply_B(x.v);
        const int ax = x.zpow + m;
        for (const Vec& y : basis) {
            if (ax + y.zpow != -1) continue;
            Scalar pairing;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) pairing += Ax[a] * G[a][b] * y.v[b];
            if (pairing.is_zero()) continue;
            if (ax % 2) pairing = -pairing;
            auto key = x.var <= y.var ? std::make_pair(x.var, y.var) : std::make_pair(y.var, x.var);
            Scalar& slot = h[key];
            slot += pairing * Scalar(Rational(1, 2));
            if (slot.is_zero()) h.erase(key);
        }
    }
    return h;
}

/// Quantizes a quadratic form monomial by monomial: qq/hbar, q d/dq, hbar d^2/dq dq.
inline FockOperator quantize_hamiltonian(const QuadraticForm& h, std::size_t nbasis, int K, bool truncated = true) {
    FockOperator op{FockIndex{nbasis, K}, {}, truncated};
    const FockIndex& ix = op.index;
    for (auto& [key, c] : h) {
        const auto& [x, y] = key;
        const int vx = ix.var(x.k, x.alpha), vy = ix.var(y.k, y.alpha);
        if (!x.momentum && !y.momentum)
            op.terms.add({-1, add_exponents({{vx, 1}}, {{vy, 1}}), {}}, c);
        else if (x.momentum && y.momentum)
            op.terms.add({1, {}, add_exponents({{vx, 1}}, {{vy, 1}})}, c);
        else if (!x.momentum)
            op.terms.add({0, {{vx, 1}}, {{vy, 1}}}, c);
        else
            op.terms.add({0, {{vy, 1}}, {{vx, 1}}}, c);
    }
    return op;
}

/// Same operator as quantize_monomial, obtained from the quadratic Hamiltonian.
inline FockOperator quantize_via_hamiltonian(const Matrix& G, const Matrix& B, int m, int K) {
    detail::fock_index(G, m, K);
    return quantize_hamiltonian(quadratic_hamiltonian(G, B, m, K), G.size(), K);
}

/// Sum of quantized monomials of a Laurent polynomial operator sum_m B_m z^m.
inline FockOperator quantize(const Matrix& G, const std::map<int, Matrix>& A, int K) {
    FockOperator op{FockIndex{G.size(), K}, {}, false};
    for (auto& [m, B] : A) op = op + quantize_monomial(G, B, m, K);
    return op;
}

// ---------------------------------------------------------------------------

/// Applies the operator to a polynomial. Known degrees shift by the smallest q-minus-d degree of a term.
inline FockPolynomial apply(const FockOperator& op, const FockPolynomial& P) {
    if (op.index.nbasis != P.index().nbasis) throw IndexOverflow("operator and polynomial have different basis sizes");
    if (op.index.K > P.index().K)
        throw IndexOverflow("operator reaches level " + std::to_string(op.index.K) + " beyond polynomial level " + std::to_string(P.index().K));
    int shift = INT_MAX;
    for (auto& [k, c] : op.terms.terms()) shift = std::min(shift, total_degree(k.q) - total_degree(k.d));
    FockPolynomial out(P.index(), P.cutoff() + (shift == INT_MAX ? 0 : shift), P.hbar_min(), P.hbar_max());
    for (auto& [k, c] : op.terms.terms()) {
        FockPolynomial term = P;
        for (auto& [v, p] : k.d)
            for (int j = 0; j < p; ++j) term = term.derivative(v);
        out += (term.shifted(k.hbar, k.q) * c).with_cutoff(out.cutoff());
    }
    return out;
}

/// exp(-F/hbar) A exp(F/hbar) for a genus-0 potential F (hbar-free) and an operator of order <= 2.
inline FockPolynomial conjugated_action(const FockOperator& op, const FockPolynomial& F) {
    if (op.index.nbasis != F.index().nbasis || op.index.K > F.index().K) throw IndexOverflow("operator exceeds the potential's variables");
    std::vector<FockPolynomial> parts;
    for (auto& [k, c] : op.terms.terms()) {
        const std::vector<std::pair<int, int>> ds(k.d.begin(), k.d.end());
        const int order = total_degree(k.d);
        FockPolynomial body(F.index(), INT_MAX / 2, F.hbar_min(), F.hbar_max());
        if (order == 0) {
            body.add(0, {}, Scalar(1));
        } else if (order == 1) {
            body = F.derivative(ds[0].first).shifted(-1, {});
        } else if (order == 2) {
            const int u = ds[0].first, v = ds.size() == 1 ? ds[0].first : ds[1].first;
            const FockPolynomial Fu = F.derivative(u), Fv = F.derivative(v);
            body = Fu.derivative(v).shifted(-1, {}) + (Fu * Fv).shifted(-2, {});
        } else {
            throw InvalidParams("conjugation implemented for operators of order <= 2");
        }
        parts.push_back(body.shifted(k.hbar, k.q) * c);
    }
    int cut = F.cutoff() + 64;
    for (auto& p : parts) cut = std::min(cut, p.cutoff());
    FockPolynomial out(F.index(), cut, F.hbar_min(), F.hbar_max());
    for (auto& p : parts) out += p.with_cutoff(cut);
    return out;
}

/// Rewrites multiplication by q_v as multiplication by (q_v + shift_v): the operator in shifted coordinates.
inline FockOperator shift_coordinates(const FockOperator& op, const std::map<int, Scalar>& shift) {
    FockOperator out{op.index, {}, op.truncated};
    for (auto& [k, c] : op.terms.terms()) {
        WeylElement acc = WeylElement::constant(c);
        for (auto& [v, p] : k.q) {
            auto it = shift.find(v);
            WeylElement lin = WeylElement::monomial(0, {{v, 1}}, {}, Scalar(1));
            if (it != shift.end()) lin += WeylElement::constant(it->second);
            for (int j = 0; j < p; ++j) acc = acc * lin;
        }
        acc = acc * WeylElement::monomial(k.hbar, {}, k.d, Scalar(1));
        out.terms += acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cocycle.

using SymplecticMonomial = std::pair<Matrix, int>;

/// Scalar part of [A^, A'^] - {A, A'}^, read off on levels unaffected by the cutoff.
inline Scalar commutator_cocycle(const Matrix& G, const SymplecticMonomial& A, const SymplecticMonomial& A2, int K) {
    const int reach = std::abs(A.second) + std::abs(A2.second);
    if (K < reach + 2) throw TruncationTooNarrow("cocycle needs K >= |m| + |m'| + 2 = " + std::to_string(reach + 2));
    const FockOperator a = quantize_monomial(G, A.first, A.second, K);
    const FockOperator b = quantize_monomial(G, A2.first, A2.second, K);
    WeylElement residual = commutator(a.terms, b.terms);
    const Matrix bracket = A.first * A2.first - A2.first * A.first;
    if (!orbiqrr::is_zero(bracket)) residual = residual - quantize_monomial(G, bracket, A.second + A2.second, K).terms;
    const FockIndex& ix = a.index;
    const int window = K - reach;
    residual = residual.filtered([&](int v) { return ix.level(v) <= window; });
    if (!residual.is_scalar()) throw TruncationTooNarrow("commutator residual is not a scalar on levels <= " + std::to_string(window));
    return residual.constant_term();
}

/// C(h_A, h_B) from the monomial rule C(p p, q q) = -C(q q, p p) = 1 + delta.
inline Scalar cocycle_closed_form(const QuadraticForm& hA, const QuadraticForm& hB) {
    const auto dual = [](DarbouxVar v) {
        v.momentum = !v.momentum;
        return v;
    };
    Scalar c;
    for (auto& [key, coeff] : hA) {
        const auto& [x, y] = key;
        if (x.momentum != y.momentum) continue;
        const auto other = hB.find({dual(x), dual(y)});
        if (other == hB.end()) continue;
        const Scalar weight(x == y ? 2 : 1);
        c += (x.momentum ? coeff : -coeff) * other->second * weight;
    }
    return c;
}

inline Scalar cocycle_closed_form(const Matrix& G, const SymplecticMonomial& A, const SymplecticMonomial& A2) {
    const int K = std::max(std::abs(A.second), std::abs(A2.second));
    return cocycle_closed_form(quadratic_hamiltonian(G, A.first, A.second, K), quadratic_hamiltonian(G, A2.first, A2.second, K));
}

// ---------------------------------------------------------------------------
// String equation on the point.

/// Genus-0 potential of the point in the unshifted variables t_k, all n <= nmax.
inline FockPolynomial point_genus0_potential(int nmax, int K) {
    if (K < std::max(0, nmax - 3)) throw IndexOverflow("level cutoff too small for n <= " + std::to_string(nmax));
    const FockIndex ix{1, K};
    FockPolynomial F(ix, nmax, 0, 0);
    const int levels = std::max(0, nmax - 3);
    for (int n = 3; n <= nmax; ++n) {
        // exponent vectors a over levels 0..levels with sum a_j = n and sum j a_j = n - 3
        std::vector<int> a(static_cast<std::size_t>(levels + 1), 0);
        const auto emit = [&] {
            std::vector<int> ks;
            Exponents e;
            Rational denom(1);
            for (int l = 0; l <= levels; ++l) {
                const int al = a[static_cast<std::size_t>(l)];
                ks.insert(ks.end(), static_cast<std::size_t>(al), l);
                if (al > 0) e[ix.var(l, 0)] = al;
                for (int r = 2; r <= al; ++r) denom *= Rational(r);
            }
            F.add(0, e, point_correlators(n, ks) * Scalar(Rational(1) / denom));
        };
        const auto rec = [&](auto&& self, int j, int left, int weight) -> void {
            if (j == levels) {
                if (weight != j * left) return;
                a[static_cast<std::size_t>(j)] = left;
                emit();
                return;
            }
            for (int c = 0; c <= left && c * j <= weight; ++c) {
                a[static_cast<std::size_t>(j)] = c;
                self(self, j + 1, left - c, weight - c * j);
            }
        };
        rec(rec, 0, n, n - 3);
    }
    return F;
}

struct StringResidual {
    FockPolynomial residual;  // hbar * exp(-F/hbar) (1/z)^ exp(F/hbar), in t-variables
    int exact_through = 0;    // total t-degree through which the residual is determined
    bool vanishes = false;
};

/// Residual of the string equation (1/z)^ D = 0 for a genus-0 potential F(t) of the point,
/// with the dilaton shift q_1 = t_1 - 1 applied to the operator.
inline StringResidual string_residual(const FockPolynomial& F) {
    const FockIndex& ix = F.index();
    if (ix.nbasis != 1) throw InvalidParams("string residual implemented for the point target");
    const Matrix G = identity_matrix(1);
    FockOperator op = quantize_monomial(G, identity_matrix(1), -1, ix.K);
    op = shift_coordinates(op, {{ix.var(1, 0), Scalar(-1)}});
    FockPolynomial wide(ix, F.cutoff(), -1, 0);
    for (auto& [k, c] : F.terms()) wide.add(k.first, k.second, c);
    FockPolynomial r = conjugated_action(op, wide);
    FockPolynomial genus0(ix, r.cutoff(), 0, 0);
    for (auto& [k, c] : r.terms()) {
        if (k.first != -1) throw TruncationTooNarrow("string residual has a term outside hbar^-1");
        genus0.add(0, k.second, c);
    }
    StringResidual out{genus0, genus0.cutoff(), genus0.is_zero()};
    return out;
}

// ---------------------------------------------------------------------------

inline nlohmann::json operator_json(const FockOperator& op) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto& [k, c] : op.terms.terms()) {
        const auto vars = [&](const Exponents& e) {
            nlohmann::json a = nlohmann::json::array();
            for (auto& [v, p] : e)
                for (int j = 0; j < p; ++j) a.push_back({{"k", op.index.level(v)}, {"basis", op.index.alpha(v)}});
            return a;
        };
        static const char* names[] = {"qq", "qd", "dd", "scalar", "other"};
        terms.push_back({{"shape", names[static_cast<int>(shape_of(k))]},
                         {"hbar", k.hbar},
                         {"q", vars(k.q)},
                         {"d", vars(k.d)},
                         {"coeff", c.to_string()}});
    }
    return {{"K", op.index.K}, {"nbasis", op.index.nbasis}, {"truncated", op.truncated}, {"terms", terms}};
}

}  // namespace orbiqrr
