#pragma once

#include <optional>
#include <string>

#include "bernoulli.hpp"
#include "givental.hpp"

namespace orbiqrr {

/// Endomorphism of H*(IX) in the global basis. The default value is the zero map of
/// unspecified size.
class Endomorphism {
public:
    Endomorphism() = default;
    explicit Endomorphism(Matrix m) : m_(std::move(m)) {
        if (orbiqrr::is_zero(m_)) m_.clear();
    }

    bool is_zero() const { return m_.empty(); }
    Matrix matrix(std::size_t n) const { return m_.empty() ? zero_matrix(n) : m_; }
    const Matrix& raw() const { return m_; }

    friend Endomorphism operator+(const Endomorphism& a, const Endomorphism& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        return Endomorphism(a.m_ + b.m_);
    }
    friend Endomorphism operator-(const Endomorphism& a, const Endomorphism& b) { return a + (-b); }
    Endomorphism operator-() const { return Endomorphism(orbiqrr::scaled(m_, Scalar(-1))); }
    friend Endomorphism operator*(const Endomorphism& a, const Endomorphism& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return Endomorphism(a.m_ * b.m_);
    }
    friend Endomorphism operator*(const Endomorphism& a, const Scalar& s) { return Endomorphism(orbiqrr::scaled(a.m_, s)); }
    friend bool operator==(const Endomorphism& a, const Endomorphism& b) { return a.m_ == b.m_; }

private:
    Matrix m_;
};

/// End(H*(IX))-valued Laurent series in z (no Novikov variables).
using LoopOperator = TruncSeries<Endomorphism>;
/// Loop operator acting by component-wise multiplication with classes.
using MultiplierSeries = TruncSeries<CohClass>;

inline const Multidegree kNoDegree{};

/// Matrix of x -> c x; column g holds the coordinates of c times the g-th basis vector.
inline Matrix multiplication_matrix(const TargetModel& t, const CohClass& c) {
    check_class(t, c);
    const std::size_t n = t.size();
    Matrix m = zero_matrix(n);
    if (!c.has_shape()) return m;
    for (std::size_t g = 0; g < n; ++g) {
        auto [i, a] = t.locate(g);
        std::vector<Scalar> col = (CohClass::basis(t, i, a) * c).to_vector();
        for (std::size_t r = 0; r < n; ++r) m[r][g] = col[r];
    }
    return m;
}

inline LoopOperator to_loop_operator(const TargetModel& t, const MultiplierSeries& s) {
    return s.map([&](const CohClass& c) { return Endomorphism(multiplication_matrix(t, c)); });
}

/// Loop operator with finitely many coefficients, exact above.
inline LoopOperator loop_operator(const std::map<int, Matrix>& coeffs) {
    int lo = 0, hi = 0;
    for (auto& [n, m] : coeffs) lo = std::min(lo, n), hi = std::max(hi, n);
    LoopOperator op(0, 0, lo, hi, true);
    for (auto& [n, m] : coeffs) op.set(kNoDegree, n, Endomorphism(m));
    return op;
}

inline LoopOperator identity_operator(const TargetModel& t) { return loop_operator({{0, identity_matrix(t.size())}}); }

// ---------------------------------------------------------------------------

/// A_m restricted to X_i is sum_l ch(F_i^(l)) B_m(l / r_i).
inline CohClass class_Am(const TargetModel& t, const BundleModel& F, int m) {
    if (m < 0) throw InvalidParams("class_Am: m must be nonnegative");
    const BernoulliPoly B(static_cast<unsigned>(m));
    std::vector<HPoly> parts;
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
        const Component& c = t.component(i);
        HPoly p(c.basis.size());
        for (int l = 0; l < c.r; ++l) {
            if (!F.piece(i, l)) continue;
            const Scalar w(B(Rational(l, c.r)));
            if (w.is_zero()) continue;
            HPoly ch = eigen_ch(t, F, i, l);
            for (std::size_t k = 0; k < p.size(); ++k) p[k] += w * ch[k];
        }
        parts.push_back(std::move(p));
    }
    return CohClass(std::move(parts));
}

/// log Delta as multiplication operators, for z-powers -1 .. zmax. The z^-1 term is
/// omitted when `include_inverse_z` is false.
inline MultiplierSeries log_delta_multipliers(const TargetModel& t, const BundleModel& F, const SValues& s, int zmax,
                                              bool include_inverse_z = true) {
    if (zmax < -1) throw InvalidParams("log_delta: zmax must be at least -1");
    MultiplierSeries out(0, 0, -1, zmax, false);
    std::vector<HPoly> inv;
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) inv.push_back(eigen_ch(t, F, i, 0));

    auto weighted = [&](const CohClass& A, int shift, const Rational& scale) {
        std::vector<HPoly> parts;
        for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
            HPoly p(A.part(i).size());
            for (std::size_t j = 0; j < p.size(); ++j) {
                const int k = static_cast<int>(j) + shift;
                if (k < 0 || A.part(i)[j].is_zero()) continue;
                p[j] = s.at(k) * A.part(i)[j] * Scalar(scale);
            }
            parts.push_back(std::move(p));
        }
        return CohClass(std::move(parts));
    };

    if (include_inverse_z) out.set(kNoDegree, -1, weighted(class_Am(t, F, 0), -1, Rational(1)));
    for (int m = 1; m - 1 <= zmax; ++m) {
        CohClass term = weighted(class_Am(t, F, m), m - 1, Rational(1) / factorial(static_cast<unsigned>(m)));
        if (m == 1) term += weighted(CohClass(inv), 0, Rational(1, 2));
        out.set(kNoDegree, m - 1, term);
    }
    return out;
}

inline LoopOperator log_delta(const TargetModel& t, const BundleModel& F, const SValues& s, int zmax, bool include_inverse_z = true) {
    return to_loop_operator(t, log_delta_multipliers(t, F, s, zmax, include_inverse_z));
}

/// exp(L) for a multiplier series with terms from z^-1 on. The z^0 constant on each
/// component must be a rational multiple of ell; everything else is topologically
/// nilpotent. The result is known through z^(L.zmax - j), where N^j is the highest
/// nonvanishing power of the z^-1 coefficient N.
inline MultiplierSeries exp_multipliers(const TargetModel& t, const MultiplierSeries& L) {
    if (L.zmin() < -1) throw InvalidParams("exp_multipliers: powers below z^-1 are not supported");
    int maxdim = 0;
    for (auto& c : t.components) maxdim = std::max(maxdim, c.dim());
    CohClass ones = CohClass::zero(t);
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) ones.at(i, 0) = Scalar(1);

    // exp(N / z), N nilpotent.
    const CohClass N = L.at(kNoDegree, -1);
    std::vector<CohClass> powers{ones};
    for (int j = 1; j <= maxdim; ++j) {
        CohClass next = powers.back() * N * Scalar(Rational(1, j));
        if (next.is_zero()) break;
        powers.push_back(next);
    }
    MultiplierSeries neg(0, 0, 1 - static_cast<int>(powers.size()), 0, true);
    for (std::size_t j = 0; j < powers.size(); ++j) neg.set(kNoDegree, -static_cast<int>(j), powers[j]);

    // Central factor lambda^{a_i} and exp of the remaining z^{>=0} part.
    CohClass central = ones;
    MultiplierSeries Y(0, 0, 0, std::max(0, L.zmax()), false);
    for (auto& [k, v] : L.coefficients()) {
        if (k.second < 0) continue;
        CohClass w = v;
        if (k.second == 0)
            for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
                const Rational a = lambda_exponent_of_log(w.get(i, 0));
                if (a != 0) central.at(i, 0) = Scalar::lambda(a);
                w.at(i, 0) = Scalar();
            }
        Y.set(kNoDegree, k.second, w);
    }
    MultiplierSeries pos = MultiplierSeries::constant(ones, 0, 0, 0, Y.zmax(), false);
    MultiplierSeries term = pos;
    for (int n = 1; !term.is_zero(); ++n) {
        term = (term * Y).scaled(Scalar(Rational(1, n)));
        pos += term;
    }
    pos = pos.map([&](const CohClass& c) { return c * central; });
    return neg * pos;
}

/// Delta = exp(log Delta) known through z^zmax.
inline MultiplierSeries delta_multipliers(const TargetModel& t, const BundleModel& F, const SValues& s, int zmax,
                                          bool include_inverse_z = true) {
    int maxdim = 0;
    for (auto& c : t.components) maxdim = std::max(maxdim, c.dim());
    MultiplierSeries L = log_delta_multipliers(t, F, s, zmax + (include_inverse_z ? maxdim : 0), include_inverse_z);
    return exp_multipliers(t, L).truncated(0, zmax);
}

inline LoopOperator delta_operator(const TargetModel& t, const BundleModel& F, const SValues& s, int zmax, bool include_inverse_z = true) {
    return to_loop_operator(t, delta_multipliers(t, F, s, zmax, include_inverse_z));
}

/// Delta^{-1} = exp(-log Delta).
inline LoopOperator delta_inverse_operator(const TargetModel& t, const BundleModel& F, const SValues& s, int zmax,
                                           bool include_inverse_z = true) {
    int maxdim = 0;
    for (auto& c : t.components) maxdim = std::max(maxdim, c.dim());
    MultiplierSeries L = log_delta_multipliers(t, F, s, zmax + (include_inverse_z ? maxdim : 0), include_inverse_z);
    return to_loop_operator(t, exp_multipliers(t, -L).truncated(0, zmax));
}

// ---------------------------------------------------------------------------

/// Adjoint with respect to the pairing with Gram matrix G: M* = G^-1 M^T G.
inline Matrix adjoint_matrix(const Matrix& G, const Matrix& M) { return inverse(G) * transpose(M) * G; }

inline LoopOperator adjoint(const Matrix& G, const LoopOperator& M) {
    const Matrix Ginv = inverse(G);
    return M.map([&](const Endomorphism& e) { return Endomorphism(Ginv * transpose(e.matrix(G.size())) * G); });
}
inline LoopOperator adjoint(const TargetModel& t, const LoopOperator& M) { return adjoint(gram_matrix(t), M); }

/// M(-z).
inline LoopOperator reflect_z(const LoopOperator& M) {
    LoopOperator r(0, 0, M.zmin(), M.zmax(), M.upper_exact());
    for (auto& [k, v] : M.coefficients()) r.set(kNoDegree, k.second, k.second % 2 ? -v : v);
    return r;
}

/// True when B z^m preserves Omega infinitesimally: B* = (-1)^{m+1} B.
inline bool is_infinitesimally_symplectic(const Matrix& G, const Matrix& B, int m) {
    const Matrix target = (m % 2 == 0) ? scaled(B, Scalar(-1)) : B;
    return orbiqrr::is_zero(adjoint_matrix(G, B) - target);
}

/// (R + (-1)^{m+1} R*) / 2, the infinitesimally symplectic part of R z^m.
inline Matrix symplectic_projection(const Matrix& G, const Matrix& R, int m) {
    const Matrix adj = adjoint_matrix(G, R);
    return scaled(m % 2 ? R + adj : R - adj, Scalar(Rational(1, 2)));
}

struct SymplecticReport {
    bool holds = false;                     // residual vanishes through checked_through
    bool all_orders = false;                // residual is exactly zero as a Laurent polynomial
    int checked_through = 0;
    int max_vanishing_degree = 0;           // largest k with residual zero in all degrees <= k
    std::optional<int> first_failure;
    std::string offending_block;            // "<row component> <- <column component>"
};

/// Checks M*(-z) M(z) = 1 through z^through (default: as far as the truncation allows).
inline SymplecticReport check_symplectomorphism(const TargetModel& t, const LoopOperator& M, std::optional<int> through = std::nullopt,
                                                const std::optional<Matrix>& gram = std::nullopt) {
    const Matrix G = gram ? *gram : gram_matrix(t);
    const std::size_t n = G.size();
    LoopOperator R = reflect_z(adjoint(G, M)) * M - loop_operator({{0, identity_matrix(n)}});
    SymplecticReport rep;
    int last = R.zmax();
    if (through) {
        if (!R.upper_exact() && *through > R.zmax())
            throw TruncationTooNarrow("symplectomorphism check through z^" + std::to_string(*through) + " needs more precision; known through z^" +
                                      std::to_string(R.zmax()));
        last = *through;
    }
    if (!R.upper_exact() && R.zmax() < 0 && !through)
        throw TruncationTooNarrow("loop operator truncation too narrow to check z^0");
    rep.checked_through = last;
    rep.max_vanishing_degree = last;
    for (auto& [k, v] : R.coefficients()) {
        if (k.second > last) break;
        rep.first_failure = k.second;
        rep.max_vanishing_degree = k.second - 1;
        const Matrix m = v.matrix(n);
        for (std::size_t a = 0; a < n && rep.offending_block.empty(); ++a)
            for (std::size_t b = 0; b < n; ++b)
                if (!m[a][b].is_zero()) {
                    rep.offending_block = t.component(t.locate(a).first).id + " <- " + t.component(t.locate(b).first).id;
                    break;
                }
        break;
    }
    rep.holds = !rep.first_failure.has_value();
    rep.all_orders = R.upper_exact() && R.is_zero();
    return rep;
}

} // namespace orbiqrr
