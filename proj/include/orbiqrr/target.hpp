#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace orbiqrr {

// ---------------------------------------------------------------------------
// Truncated polynomials Scalar[h]/(h^n), the cohomology ring of one component.

using HPoly = std::vector<Scalar>;

inline HPoly hpoly_mul(const HPoly& a, const HPoly& b) {
    const std::size_t n = std::max(a.size(), b.size());
    HPoly c(n);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; i + j < n && j < b.size(); ++j)
            if (!b[j].is_zero()) c[i + j] += a[i] * b[j];
    }
    return c;
}

/// For c = a ell returns a, so that exp(c) = lambda^a; other constants have no exact exponential.
inline Rational lambda_exponent_of_log(const Scalar& c) {
    if (c.is_zero()) return Rational(0);
    if (c.ell_degree() > 1 || !c.ell_coefficient(0).is_zero() || !c.ell_coefficient(1).is_rational())
        throw NonUnitTwist("exponential of constant term " + c.to_string() + " is not a power of lambda");
    return c.ell_coefficient(1).rational();
}

/// exp(x) in Scalar[h]/(h^n). The constant term must be a rational multiple of ell,
/// so that exp of it is the power lambda^a.
inline HPoly hpoly_exp(const HPoly& x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const Rational a = lambda_exponent_of_log(x[0]);
    HPoly nil = x;
    nil[0] = Scalar();
    HPoly result(n), term(n);
    term[0] = Scalar(1);
    result[0] = Scalar(1);
    for (std::size_t k = 1; k < n; ++k) {
        term = hpoly_mul(term, nil);
        for (auto& v : term) v /= Scalar(static_cast<long>(k));
        for (std::size_t i = 0; i < n; ++i) result[i] += term[i];
    }
    if (a != 0) {
        Scalar la = Scalar::lambda(a);
        for (auto& v : result) v *= la;
    }
    return result;
}

// ---------------------------------------------------------------------------

struct BasisElement {
    std::string name;
    int degree = 0;  // real degree
    friend bool operator==(const BasisElement&, const BasisElement&) = default;
};

/// One component X_i of the inertia stack. The basis is h^0, ..., h^dim with the
/// truncated polynomial product; pairing[a][b] = integral over X_i of h^a times I^*(h^b)
/// where h^b lives on the partner component.
struct Component {
    std::string id;
    int r = 1;
    Rational age;
    int partner = 0;
    std::vector<BasisElement> basis;
    std::vector<std::vector<Rational>> pairing;

    int dim() const { return static_cast<int>(basis.size()) - 1; }
    friend bool operator==(const Component&, const Component&) = default;
};

struct TargetModel {
    std::string name;
    int dim = 0;
    int curve_rank = 1;
    std::vector<Component> components;
    std::vector<long> c1_tangent;                // <c1(T), curve generator>
    std::vector<std::string> genus1_constants;   // opaque symbols, never evaluated
    std::optional<std::string> jfunction_file;

    std::size_t size() const {
        std::size_t n = 0;
        for (auto& c : components) n += c.basis.size();
        return n;
    }
    std::size_t offset(int i) const {
        std::size_t n = 0;
        for (int k = 0; k < i; ++k) n += components[static_cast<std::size_t>(k)].basis.size();
        return n;
    }
    std::size_t index(int i, int alpha) const { return offset(i) + static_cast<std::size_t>(alpha); }
    /// (component, basis index) of a global index.
    std::pair<int, int> locate(std::size_t g) const {
        for (int i = 0; i < static_cast<int>(components.size()); ++i) {
            const std::size_t n = components[static_cast<std::size_t>(i)].basis.size();
            if (g < n) return {i, static_cast<int>(g)};
            g -= n;
        }
        throw IndexOutOfRange("global basis index out of range");
    }
    const Component& component(int i) const {
        if (i < 0 || i >= static_cast<int>(components.size())) throw IndexOutOfRange("component " + std::to_string(i));
        return components[static_cast<std::size_t>(i)];
    }
    int find_component(const std::string& id) const {
        for (std::size_t i = 0; i < components.size(); ++i)
            if (components[i].id == id) return static_cast<int>(i);
        throw IndexOutOfRange("no component '" + id + "'");
    }
    /// Orbifold degree deg + 2 age of basis element alpha on component i (real).
    Rational orbifold_degree(int i, int alpha) const {
        const Component& c = component(i);
        return Rational(c.basis.at(static_cast<std::size_t>(alpha)).degree) + 2 * c.age;
    }

    friend bool operator==(const TargetModel&, const TargetModel&) = default;
};

/// Gram matrix g_{ab} = (phi_a, phi_b)_orb in the global basis.
inline Matrix gram_matrix(const TargetModel& t) {
    Matrix g = zero_matrix(t.size());
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
        const Component& c = t.component(i);
        for (std::size_t a = 0; a < c.basis.size(); ++a)
            for (std::size_t b = 0; b < c.basis.size(); ++b)
                if (c.pairing[a][b] != 0) g[t.index(i, static_cast<int>(a))][t.index(c.partner, static_cast<int>(b))] = Scalar(c.pairing[a][b]);
    }
    return g;
}

// ---------------------------------------------------------------------------

/// Element of H*(IX): one truncated polynomial per component. The default value is
/// the zero class of unspecified shape.
class CohClass {
public:
    CohClass() = default;
    explicit CohClass(std::vector<HPoly> parts) : parts_(std::move(parts)) {}

    static CohClass zero(const TargetModel& t) {
        std::vector<HPoly> p;
        for (auto& c : t.components) p.emplace_back(c.basis.size());
        return CohClass(std::move(p));
    }
    static CohClass unit(const TargetModel& t) { return basis(t, 0, 0); }
    /// 1 on every component: the identity of the componentwise product.
    static CohClass ones(const TargetModel& t) {
        CohClass c = zero(t);
        for (auto& p : c.parts_) p[0] = Scalar(1);
        return c;
    }
    static CohClass basis(const TargetModel& t, int i, int alpha) {
        CohClass c = zero(t);
        c.at(i, alpha) = Scalar(1);
        return c;
    }
    /// Class supported on a single component.
    static CohClass on_component(const TargetModel& t, int i, const HPoly& p) {
        CohClass c = zero(t);
        HPoly& dst = c.parts_.at(static_cast<std::size_t>(i));
        for (std::size_t k = 0; k < dst.size() && k < p.size(); ++k) dst[k] = p[k];
        return c;
    }
    /// Class from a global coordinate vector.
    static CohClass from_vector(const TargetModel& t, const std::vector<Scalar>& v) {
        if (v.size() != t.size()) throw BasisMismatch("coordinate vector has wrong length");
        CohClass c = zero(t);
        for (std::size_t g = 0; g < v.size(); ++g) {
            auto [i, a] = t.locate(g);
            c.at(i, a) = v[g];
        }
        return c;
    }

    bool has_shape() const { return !parts_.empty(); }
    std::size_t num_components() const { return parts_.size(); }
    const HPoly& part(int i) const { return parts_.at(static_cast<std::size_t>(i)); }
    HPoly& part(int i) { return parts_.at(static_cast<std::size_t>(i)); }
    Scalar& at(int i, int alpha) { return parts_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(alpha)); }
    Scalar get(int i, int alpha) const {
        if (parts_.empty()) return Scalar();
        return parts_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(alpha));
    }
    std::vector<Scalar> to_vector() const {
        std::vector<Scalar> v;
        for (auto& p : parts_) v.insert(v.end(), p.begin(), p.end());
        return v;
    }

    bool is_zero() const {
        for (auto& p : parts_)
            for (auto& x : p)
                if (!x.is_zero()) return false;
        return true;
    }

    friend CohClass operator+(const CohClass& a, const CohClass& b) { return combine(a, b, false); }
    friend CohClass operator-(const CohClass& a, const CohClass& b) { return combine(a, b, true); }
    CohClass operator-() const {
        CohClass r = *this;
        for (auto& p : r.parts_)
            for (auto& x : p) x = -x;
        return r;
    }
    CohClass& operator+=(const CohClass& b) { return *this = *this + b; }

    /// Component-wise product (classes acting by multiplication on each sector).
    friend CohClass operator*(const CohClass& a, const CohClass& b) {
        if (!a.has_shape() || !b.has_shape()) return CohClass();
        check_shape(a, b);
        CohClass r = a;
        for (std::size_t i = 0; i < r.parts_.size(); ++i) r.parts_[i] = hpoly_mul(a.parts_[i], b.parts_[i]);
        return r;
    }
    friend CohClass operator*(const CohClass& a, const Scalar& s) {
        CohClass r = a;
        for (auto& p : r.parts_)
            for (auto& x : p) x *= s;
        return r;
    }
    friend CohClass operator*(const Scalar& s, const CohClass& a) { return a * s; }

    friend bool operator==(const CohClass& a, const CohClass& b) {
        if (!a.has_shape() || !b.has_shape()) return (a - b).is_zero();
        return a.parts_ == b.parts_;
    }

private:
    static void check_shape(const CohClass& a, const CohClass& b) {
        bool ok = a.parts_.size() == b.parts_.size();
        for (std::size_t i = 0; ok && i < a.parts_.size(); ++i) ok = a.parts_[i].size() == b.parts_[i].size();
        if (!ok) throw BasisMismatch("classes live on different targets");
    }
    static CohClass combine(const CohClass& a, const CohClass& b, bool subtract) {
        if (!b.has_shape()) return a;
        if (!a.has_shape()) return subtract ? -b : b;
        check_shape(a, b);
        CohClass r = a;
        for (std::size_t i = 0; i < r.parts_.size(); ++i)
            for (std::size_t k = 0; k < r.parts_[i].size(); ++k)
                subtract ? r.parts_[i][k] -= b.parts_[i][k] : r.parts_[i][k] += b.parts_[i][k];
        return r;
    }

    std::vector<HPoly> parts_;
};

/// Pullback along the involution: component i receives the part of i^I.
inline CohClass involution_pullback(const TargetModel& t, const CohClass& a) {
    if (!a.has_shape()) return a;
    std::vector<HPoly> p(t.components.size());
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) p[static_cast<std::size_t>(i)] = a.part(t.component(i).partner);
    return CohClass(std::move(p));
}

inline void check_class(const TargetModel& t, const CohClass& a) {
    if (!a.has_shape()) return;
    bool ok = a.num_components() == t.components.size();
    for (int i = 0; ok && i < static_cast<int>(t.components.size()); ++i) ok = a.part(i).size() == t.component(i).basis.size();
    if (!ok) throw BasisMismatch("class does not match the basis of target " + t.name);
}

/// (a, b)_orb = sum_i integral over X_i of a_i times I^*(b_{i^I}).
inline Scalar orbifold_pairing(const TargetModel& t, const CohClass& a, const CohClass& b) {
    check_class(t, a);
    check_class(t, b);
    Scalar s;
    if (!a.has_shape() || !b.has_shape()) return s;
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
        const Component& c = t.component(i);
        const HPoly& x = a.part(i);
        const HPoly& y = b.part(c.partner);
        for (std::size_t p = 0; p < x.size(); ++p) {
            if (x[p].is_zero()) continue;
            for (std::size_t q = 0; q < y.size(); ++q)
                if (c.pairing[p][q] != 0 && !y[q].is_zero()) s += x[p] * y[q] * Scalar(c.pairing[p][q]);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------

/// Eigen-subbundle F_i^(l) data: rank and Chern character ch_k (coefficient of h^k).
struct EigenPiece {
    int component = 0;
    int l = 0;
    int rank = 0;
    std::vector<Rational> ch;
    friend bool operator==(const EigenPiece&, const EigenPiece&) = default;
};

struct BundleModel {
    std::string name;
    bool pulled_back = false;
    int rank = 0;
    std::vector<long> c1_pairing;  // <c1(F), curve generator>
    std::vector<EigenPiece> eigen;
    std::vector<long> lines;       // split summands O(a_j) with Chern root a_j h; empty if not split

    const EigenPiece* piece(int i, int l) const {
        for (auto& p : eigen)
            if (p.component == i && p.l == l) return &p;
        return nullptr;
    }
    friend bool operator==(const BundleModel&, const BundleModel&) = default;
};

/// Chern character of F_i^(l) as a polynomial of the component's length.
inline HPoly eigen_ch(const TargetModel& t, const BundleModel& F, int i, int l) {
    const Component& c = t.component(i);
    if (l < 0 || l >= c.r) throw IndexOutOfRange("eigen index " + std::to_string(l) + " outside [0, " + std::to_string(c.r) + ")");
    HPoly p(c.basis.size());
    if (const EigenPiece* e = F.piece(i, l))
        for (std::size_t k = 0; k < p.size() && k < e->ch.size(); ++k) p[k] = Scalar(e->ch[k]);
    return p;
}

inline int eigen_rank(const BundleModel& F, int i, int l) {
    const EigenPiece* e = F.piece(i, l);
    return e ? e->rank : 0;
}

/// ch_k(F_i^(l)).
inline Scalar eigen_chern(const TargetModel& t, const BundleModel& F, int i, int l, int k) {
    HPoly p = eigen_ch(t, F, i, l);
    if (k < 0) throw IndexOutOfRange("negative Chern character degree");
    return k < static_cast<int>(p.size()) ? p[static_cast<std::size_t>(k)] : Scalar();
}

/// age(F_i) = sum_l (l / r_i) rank F_i^(l).
inline Rational age_of_bundle(const TargetModel& t, const BundleModel& F, int i) {
    const Component& c = t.component(i);
    Rational a(0);
    for (int l = 1; l < c.r; ++l) a += Rational(l * eigen_rank(F, i, l), c.r);
    a.canonicalize();
    return a;
}

/// rank of the moving part sum_{l > 0} F_i^(l).
inline int moving_rank(const TargetModel& t, const BundleModel& F, int i) {
    int n = 0;
    for (int l = 1; l < t.component(i).r; ++l) n += eigen_rank(F, i, l);
    return n;
}

// ---------------------------------------------------------------------------

/// Parameters s_0, s_1, ... of a multiplicative class c(.) = exp(sum s_k ch_k(.)).
/// With `euler` set, indices past the stored list follow the Euler specialization.
struct SValues {
    std::vector<Scalar> values;
    bool euler = false;

    Scalar at(int k) const {
        if (k < static_cast<int>(values.size())) return values[static_cast<std::size_t>(k)];
        if (euler && k >= 1)
            return Scalar(((k - 1) % 2 ? -1 : 1) * factorial(static_cast<unsigned>(k - 1))) / Scalar::lambda(Rational(k));
        return Scalar();
    }
    bool all_zero() const {
        if (euler) return false;
        return std::all_of(values.begin(), values.end(), [](const Scalar& s) { return s.is_zero(); });
    }
};

/// s_0 = ell (or 0 without the log), s_k = (-1)^{k-1} (k-1)! / lambda^k.
inline SValues euler_s_values(int kmax, bool include_log = true) {
    if (kmax < 0) throw InvalidParams("kmax must be nonnegative");
    SValues s;
    s.euler = true;
    s.values.push_back(include_log ? Scalar::ell() : Scalar());
    for (int k = 1; k <= kmax; ++k) s.values.push_back(SValues{{}, true}.at(k));
    return s;
}

/// sum_k s_k ch_k(E) for a Chern character polynomial.
inline HPoly s_weighted(const HPoly& ch, const SValues& s) {
    HPoly r(ch.size());
    for (std::size_t k = 0; k < ch.size(); ++k)
        if (!ch[k].is_zero()) r[k] = s.at(static_cast<int>(k)) * ch[k];
    return r;
}

/// c((q^*F)^inv) raised to `power` (1 for c, 1/2 for its square root), per component.
inline CohClass invariant_char_class(const TargetModel& t, const BundleModel& F, const SValues& s, const Rational& power = 1) {
    std::vector<HPoly> parts;
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
        HPoly x = s_weighted(eigen_ch(t, F, i, 0), s);
        for (auto& v : x) v *= Scalar(power);
        parts.push_back(hpoly_exp(x));
    }
    return CohClass(std::move(parts));
}

/// (a, b)_(c,F) = sum_i integral over X_i of a_i I^*(b) c((q^*F)^inv_i).
inline Scalar twisted_pairing(const TargetModel& t, const BundleModel& F, const SValues& s, const CohClass& a, const CohClass& b) {
    check_class(t, a);
    return orbifold_pairing(t, a * invariant_char_class(t, F, s), b);
}

/// Gram matrix of the twisted pairing.
inline Matrix twisted_gram_matrix(const TargetModel& t, const BundleModel& F, const SValues& s) {
    const std::size_t n = t.size();
    Matrix g = zero_matrix(n);
    CohClass c = invariant_char_class(t, F, s);
    for (std::size_t p = 0; p < n; ++p) {
        auto [i, a] = t.locate(p);
        CohClass x = CohClass::basis(t, i, a) * c;
        for (std::size_t q = 0; q < n; ++q) {
            auto [j, b] = t.locate(q);
            if (j != t.component(i).partner) continue;
            g[p][q] = orbifold_pairing(t, x, CohClass::basis(t, j, b));
        }
    }
    return g;
}

} // namespace orbiqrr
