#pragma once

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "cyclotomic.hpp"

namespace orbiqrr {

/// Exact element of Q(lambda^{1/D})[ell] (x) Q(zeta_N), ell = ln(lambda) a formal symbol.
///
/// Canonical form: value = (sum_t c_t ell^{a_t} mu^{b_t}) / den(mu), where mu = lambda^{1/D},
/// the numerator is a Laurent polynomial in mu with cyclotomic coefficients, den is a monic
/// rational polynomial with den(0) != 0, numerator and denominator share no factor over Q,
/// and D is the smallest root degree that represents the value. Equality is structural.
class Scalar {
public:
    struct Term {
        int ell = 0;
        int mu = 0;
        Cyclo coeff;
    };

    Scalar() = default;
    Scalar(const Rational& r) {
        if (r != 0) num_.push_back({0, 0, Cyclo(r)});
    }
    Scalar(long v) : Scalar(Rational(v)) {}
    Scalar(int v) : Scalar(Rational(v)) {}
    Scalar(const Cyclo& c) {
        if (!c.is_zero()) num_.push_back({0, 0, c});
    }

    /// lambda^e for rational e.
    static Scalar lambda(const Rational& e = 1) {
        Scalar s;
        s.root_ = static_cast<int>(e.get_den().get_si());
        s.num_.push_back({0, static_cast<int>(e.get_num().get_si()), Cyclo(1)});
        s.canonicalize();
        return s;
    }
    /// The formal symbol ell = ln(lambda).
    static Scalar ell() {
        Scalar s;
        s.num_.push_back({1, 0, Cyclo(1)});
        return s;
    }
    static Scalar root_of_unity(int n, long k) { return Scalar(Cyclo::root_of_unity(n, k)); }

    /// Builds a value from raw parts; the result is canonicalized.
    static Scalar from_parts(int root, std::vector<Term> num, QPoly den) {
        if (den.is_zero()) throw NonInvertible("zero denominator");
        if (root < 1) throw ParseError("root degree must be positive");
        Scalar s;
        s.root_ = root;
        s.num_ = std::move(num);
        // move mu factors of den into the numerator
        int shift = 0;
        while (den[static_cast<std::size_t>(shift)] == 0) ++shift;
        if (shift > 0) {
            std::vector<Rational> c(den.coeffs().begin() + shift, den.coeffs().end());
            den = QPoly(std::move(c));
            for (auto& t : s.num_) t.mu -= shift;
        }
        s.den_ = std::move(den);
        s.canonicalize();
        return s;
    }

    int root() const { return root_; }
    const std::vector<Term>& terms() const { return num_; }
    const QPoly& den() const { return den_; }

    bool is_zero() const { return num_.empty(); }
    bool is_one() const { return num_.size() == 1 && den_.is_one() && num_[0].ell == 0 && num_[0].mu == 0 && num_[0].coeff == Cyclo(1); }
    bool has_ell() const {
        return std::any_of(num_.begin(), num_.end(), [](const Term& t) { return t.ell != 0; });
    }
    int ell_degree() const {
        int d = 0;
        for (auto& t : num_) d = std::max(d, t.ell);
        return d;
    }
    /// True when the value lies in Q(zeta) (no lambda, no ell).
    bool is_constant() const {
        return den_.is_one() && std::all_of(num_.begin(), num_.end(), [](const Term& t) { return t.ell == 0 && t.mu == 0; });
    }
    bool is_rational() const { return is_constant() && (num_.empty() || num_[0].coeff.is_rational()); }
    Rational rational() const {
        if (!is_rational()) throw InvalidParams("scalar is not a rational constant: " + to_string());
        return num_.empty() ? Rational(0) : num_[0].coeff.rational();
    }
    Cyclo constant() const {
        if (!is_constant()) throw InvalidParams("scalar is not constant: " + to_string());
        return num_.empty() ? Cyclo(0) : num_[0].coeff;
    }
    /// Largest cyclotomic order occurring in the coefficients.
    int cyclo_order() const {
        int n = 1;
        for (auto& t : num_) n = std::lcm(n, t.coeff.order());
        return n;
    }

    Scalar& operator+=(const Scalar& o) { return *this = add(*this, o, false); }
    Scalar& operator-=(const Scalar& o) { return *this = add(*this, o, true); }
    Scalar& operator*=(const Scalar& o) { return *this = mul(*this, o); }
    Scalar& operator/=(const Scalar& o) { return *this = mul(*this, o.inverse()); }
    friend Scalar operator+(const Scalar& a, const Scalar& b) { return add(a, b, false); }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return add(a, b, true); }
    friend Scalar operator*(const Scalar& a, const Scalar& b) { return mul(a, b); }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return mul(a, b.inverse()); }
    Scalar operator-() const {
        Scalar r = *this;
        for (auto& t : r.num_) t.coeff = -t.coeff;
        return r;
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.root_ != b.root_ || a.num_.size() != b.num_.size() || !(a.den_ == b.den_)) return false;
        for (std::size_t i = 0; i < a.num_.size(); ++i) {
            const Term &x = a.num_[i], &y = b.num_[i];
            if (x.ell != y.ell || x.mu != y.mu || !(x.coeff == y.coeff)) return false;
        }
        return true;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    Scalar inverse() const {
        if (is_zero()) throw NonInvertible("inverse of zero");
        if (has_ell()) throw NonInvertible("ell = ln(lambda) is not invertible: " + to_string());
        if (num_.size() == 1) {
            // c mu^j: invert directly
            std::vector<Term> n;
            Cyclo ci = num_[0].coeff.inverse();
            for (std::size_t i = 0; i < den_.coeffs().size(); ++i)
                if (den_.coeffs()[i] != 0)
                    n.push_back({0, static_cast<int>(i) - num_[0].mu, ci * Cyclo(den_.coeffs()[i])});
            return from_parts(root_, std::move(n), QPoly::constant(1));
        }
        const bool rational_coeffs = std::all_of(num_.begin(), num_.end(), [](const Term& t) { return t.coeff.is_rational(); });
        if (rational_coeffs) {
            int lo = num_.front().mu;
            for (auto& t : num_) lo = std::min(lo, t.mu);
            std::vector<Rational> p;
            for (auto& t : num_) {
                std::size_t k = static_cast<std::size_t>(t.mu - lo);
                if (p.size() <= k) p.resize(k + 1);
                p[k] += t.coeff.rational();
            }
            std::vector<Term> n;
            for (std::size_t i = 0; i < den_.coeffs().size(); ++i)
                if (den_.coeffs()[i] != 0) n.push_back({0, static_cast<int>(i) - lo, Cyclo(den_.coeffs()[i])});
            return from_parts(root_, std::move(n), QPoly(std::move(p)));
        }
        // multiply by the other Galois conjugates; the norm has rational coefficients
        const int order = cyclo_order();
        Scalar numer = numerator_only();
        Scalar others(1);
        for (int k = 2; k < order; ++k)
            if (std::gcd(k, order) == 1) others *= numer.galois(k);
        Scalar norm = numer * others;
        Scalar result = others * norm.inverse();
        Scalar d;
        d.root_ = root_;
        for (std::size_t i = 0; i < den_.coeffs().size(); ++i)
            if (den_.coeffs()[i] != 0) d.num_.push_back({0, static_cast<int>(i), Cyclo(den_.coeffs()[i])});
        return result * d;
    }

    /// Integer power, negative allowed for invertible values.
    Scalar pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Scalar r(1), b = *this;
        while (e > 0) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    /// Galois action zeta -> zeta^k on every coefficient.
    Scalar galois(int k) const {
        Scalar r = *this;
        for (auto& t : r.num_) t.coeff = t.coeff.conjugate(k % t.coeff.order() == 0 ? 1 : k);
        r.canonicalize();
        return r;
    }

    /// Substitutes lambda = 0. Requires no pole at zero and no ell.
    Scalar nonequiv_limit() const {
        if (has_ell()) throw LogObstruction("ell = ln(lambda) occurs in " + to_string());
        Cyclo v(0);
        for (auto& t : num_) {
            if (t.mu < 0) throw PoleAtZero("pole at lambda = 0 in " + to_string());
            if (t.mu == 0) v += t.coeff;
        }
        return Scalar(v * Cyclo(1 / den_[0]));
    }

    /// Coefficient of ell^k as a scalar.
    Scalar ell_coefficient(int k) const {
        Scalar r;
        r.root_ = root_;
        r.den_ = den_;
        for (auto& t : num_)
            if (t.ell == k) r.num_.push_back({0, t.mu, t.coeff});
        r.canonicalize();
        return r;
    }

    /// Human-readable form, e.g. "(120*lambda^2 + 5)/(lambda + 1)".
    std::string to_string() const {
        if (num_.empty()) return "0";
        auto mu_str = [&](int e) -> std::string {
            Rational q(e, root_);
            q.canonicalize();
            if (q == 1) return "lambda";
            return "lambda^(" + q.get_str() + ")";
        };
        auto cyclo_str = [](const Cyclo& c) -> std::string {
            if (c.is_rational()) return c.rational().get_str();
            std::string s;
            for (std::size_t a = 0; a < c.coeffs().size(); ++a) {
                const Rational& x = c.coeffs()[a];
                if (x == 0) continue;
                if (!s.empty()) s += " + ";
                s += x.get_str();
                if (a > 0) s += "*zeta" + std::to_string(c.order()) + (a > 1 ? "^" + std::to_string(a) : "");
            }
            return "(" + s + ")";
        };
        std::string n;
        for (auto& t : num_) {
            if (!n.empty()) n += " + ";
            std::string part = cyclo_str(t.coeff);
            if (t.ell > 0) part += "*ell" + (t.ell > 1 ? "^" + std::to_string(t.ell) : std::string());
            if (t.mu != 0) part += "*" + mu_str(t.mu);
            n += part;
        }
        if (den_.is_one()) return num_.size() > 1 ? "(" + n + ")" : n;
        std::string d;
        for (std::size_t i = 0; i < den_.coeffs().size(); ++i) {
            if (den_.coeffs()[i] == 0) continue;
            if (!d.empty()) d += " + ";
            d += den_.coeffs()[i].get_str();
            if (i > 0) d += "*" + mu_str(static_cast<int>(i));
        }
        return "(" + n + ")/(" + d + ")";
    }

private:
    Scalar numerator_only() const {
        Scalar r;
        r.root_ = root_;
        r.num_ = num_;
        return r;
    }

    // Express both values over the same root degree.
    static int common_root(const Scalar& a, const Scalar& b) { return std::lcm(a.root_, b.root_); }

    Scalar with_root(int d) const {
        if (d == root_) return *this;
        const int k = d / root_;
        Scalar r;
        r.root_ = d;
        r.num_ = num_;
        for (auto& t : r.num_) t.mu *= k;
        std::vector<Rational> c(static_cast<std::size_t>(den_.degree() * k + 1));
        for (std::size_t i = 0; i < den_.coeffs().size(); ++i) c[i * k] = den_.coeffs()[i];
        r.den_ = QPoly(std::move(c));
        return r;
    }

    static std::vector<Term> times_poly(const std::vector<Term>& num, const QPoly& p) {
        if (p.is_one()) return num;
        std::vector<Term> out;
        out.reserve(num.size() * p.coeffs().size());
        for (auto& t : num)
            for (std::size_t i = 0; i < p.coeffs().size(); ++i)
                if (p.coeffs()[i] != 0) out.push_back({t.ell, t.mu + static_cast<int>(i), t.coeff * Cyclo(p.coeffs()[i])});
        return out;
    }

    static Scalar add(const Scalar& a0, const Scalar& b0, bool subtract) {
        if (b0.is_zero()) return a0;
        if (a0.is_zero()) return subtract ? -b0 : b0;
        const int d = common_root(a0, b0);
        Scalar a = a0.with_root(d), b = b0.with_root(d);
        Scalar r;
        r.root_ = d;
        if (a.den_ == b.den_) {
            r.den_ = a.den_;
            r.num_ = a.num_;
            for (auto& t : b.num_) r.num_.push_back({t.ell, t.mu, subtract ? -t.coeff : t.coeff});
        } else {
            r.num_ = times_poly(a.num_, b.den_);
            for (auto& t : times_poly(b.num_, a.den_)) r.num_.push_back({t.ell, t.mu, subtract ? -t.coeff : t.coeff});
            r.den_ = a.den_ * b.den_;
        }
        r.canonicalize();
        return r;
    }

    static Scalar mul(const Scalar& a0, const Scalar& b0) {
        if (a0.is_zero() || b0.is_zero()) return Scalar();
        const int d = common_root(a0, b0);
        Scalar a = a0.with_root(d), b = b0.with_root(d);
        Scalar r;
        r.root_ = d;
        r.num_.reserve(a.num_.size() * b.num_.size());
        for (auto& x : a.num_)
            for (auto& y : b.num_) r.num_.push_back({x.ell + y.ell, x.mu + y.mu, x.coeff * y.coeff});
        r.den_ = a.den_ * b.den_;
        r.canonicalize();
        return r;
    }

    void merge_terms() {
        std::sort(num_.begin(), num_.end(), [](const Term& x, const Term& y) { return std::tie(x.ell, x.mu) < std::tie(y.ell, y.mu); });
        std::vector<Term> out;
        out.reserve(num_.size());
        for (auto& t : num_) {
            if (!out.empty() && out.back().ell == t.ell && out.back().mu == t.mu)
                out.back().coeff += t.coeff;
            else
                out.push_back(std::move(t));
        }
        out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coeff.is_zero(); }), out.end());
        num_ = std::move(out);
    }

    void canonicalize() {
        merge_terms();
        if (num_.empty()) {
            den_ = QPoly::constant(1);
            root_ = 1;
            return;
        }
        if (!den_.is_one()) reduce_fraction();
        if (!den_.is_one() && den_.lead() != 1) {
            Rational s = den_.lead();
            den_ = den_.monic();
            Cyclo inv(1 / s);
            for (auto& t : num_) t.coeff *= inv;
        }
        reduce_root();
    }

    // Cancel the rational gcd of den with every Q-component of the numerator.
    void reduce_fraction() {
        int order = cyclo_order();
        int lo = num_.front().mu;
        for (auto& t : num_) lo = std::min(lo, t.mu);
        QPoly g = den_;
        std::vector<std::tuple<int, std::size_t, QPoly>> parts;  // (ell, cyclo index, poly)
        {
            std::vector<std::vector<std::vector<Rational>>> comp;  // [ell][cyclo idx] -> coeffs
            const std::size_t phi = static_cast<std::size_t>(euler_phi(order));
            int max_ell = ell_degree();
            comp.assign(static_cast<std::size_t>(max_ell + 1), std::vector<std::vector<Rational>>(phi));
            for (auto& t : num_) {
                Cyclo c = t.coeff.order() == order ? t.coeff : t.coeff.lifted(order);
                for (std::size_t a = 0; a < c.coeffs().size(); ++a) {
                    if (c.coeffs()[a] == 0) continue;
                    auto& v = comp[static_cast<std::size_t>(t.ell)][a];
                    std::size_t k = static_cast<std::size_t>(t.mu - lo);
                    if (v.size() <= k) v.resize(k + 1);
                    v[k] += c.coeffs()[a];
                }
            }
            for (std::size_t e = 0; e < comp.size(); ++e)
                for (std::size_t a = 0; a < comp[e].size(); ++a) {
                    QPoly p(comp[e][a]);
                    if (p.is_zero()) continue;
                    if (g.degree() > 0) g = gcd(g, p);
                    parts.emplace_back(static_cast<int>(e), a, std::move(p));
                }
        }
        if (g.degree() <= 0) return;
        den_ = divmod(den_, g).first;
        std::vector<Term> out;
        for (auto& [e, a, p] : parts) {
            QPoly q = divmod(p, g).first;
            for (std::size_t k = 0; k < q.coeffs().size(); ++k) {
                if (q.coeffs()[k] == 0) continue;
                Cyclo c = order == 1 ? Cyclo(q.coeffs()[k]) : Cyclo::root_of_unity(order, static_cast<long>(a)) * Cyclo(q.coeffs()[k]);
                out.push_back({e, lo + static_cast<int>(k), c});
            }
        }
        num_ = std::move(out);
        merge_terms();
    }

    void reduce_root() {
        if (root_ == 1) return;
        int g = root_;
        for (auto& t : num_) g = std::gcd(g, std::abs(t.mu));
        for (std::size_t i = 0; i < den_.coeffs().size() && g > 1; ++i)
            if (den_.coeffs()[i] != 0) g = std::gcd(g, static_cast<int>(i));
        if (g <= 1) return;
        for (auto& t : num_) t.mu /= g;
        std::vector<Rational> c(static_cast<std::size_t>(den_.degree() / g + 1));
        for (std::size_t i = 0; i < den_.coeffs().size(); ++i)
            if (den_.coeffs()[i] != 0) c[i / static_cast<std::size_t>(g)] = den_.coeffs()[i];
        den_ = QPoly(std::move(c));
        root_ /= g;
    }

    int root_ = 1;
    std::vector<Term> num_;
    QPoly den_ = QPoly::constant(1);
};

inline Scalar root_of_unity(int n, long k) { return Scalar::root_of_unity(n, k); }

inline Scalar nonequiv_limit(const Scalar& a) { return a.nonequiv_limit(); }

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

} // namespace orbiqrr
