#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "target.hpp"

namespace orbiqrr {

namespace detail {

inline std::vector<BasisElement> monomial_basis(int dim) {
    std::vector<BasisElement> b;
    for (int k = 0; k <= dim; ++k) b.push_back({k == 0 ? "1" : k == 1 ? "h" : "h^" + std::to_string(k), 2 * k});
    return b;
}

/// Anti-diagonal pairing with top intersection number `top`.
inline std::vector<std::vector<Rational>> top_pairing(int dim, const Rational& top) {
    std::vector<std::vector<Rational>> p(static_cast<std::size_t>(dim + 1), std::vector<Rational>(static_cast<std::size_t>(dim + 1)));
    for (int a = 0; a <= dim; ++a) p[static_cast<std::size_t>(a)][static_cast<std::size_t>(dim - a)] = top;
    return p;
}

inline std::vector<Rational> exp_ch(long a, int dim) {
    std::vector<Rational> ch;
    for (int k = 0; k <= dim; ++k) ch.push_back(power(Rational(a), static_cast<unsigned>(k)) / factorial(static_cast<unsigned>(k)));
    return ch;
}

/// Sectors of WPS(w): the distinct fractions k / w_j in [0, 1).
inline std::vector<Rational> wps_fractions(const std::vector<long>& w) {
    std::set<Rational> fs;
    for (long wj : w)
        for (long k = 0; k < wj; ++k) {
            Rational f(k, wj);
            f.canonicalize();
            fs.insert(f);
        }
    return {fs.begin(), fs.end()};
}

} // namespace detail

inline TargetModel build_point() {
    TargetModel t;
    t.name = "point";
    t.dim = 0;
    t.curve_rank = 0;
    t.components.push_back({"1", 1, Rational(0), 0, detail::monomial_basis(0), detail::top_pairing(0, 1)});
    return t;
}

/// B mu_r: one point sector per group element g^k. The sector records the order of
/// g^k (r / gcd(k, r)); every integral over B mu_r carries the factor 1/r.
inline TargetModel build_bmu(int r) {
    if (r < 1) throw InvalidParams("B mu_r needs r >= 1");
    TargetModel t;
    t.name = "Bmu" + std::to_string(r);
    t.dim = 0;
    t.curve_rank = 0;
    for (int k = 0; k < r; ++k)
        t.components.push_back({"g^" + std::to_string(k), r / std::gcd(k, r), Rational(0), (r - k) % r, detail::monomial_basis(0),
                                detail::top_pairing(0, Rational(1, r))});
    return t;
}

inline TargetModel build_wps(const std::vector<long>& w) {
    if (w.size() < 2) throw InvalidParams("weighted projective space needs at least two weights");
    for (long x : w)
        if (x < 1) throw InvalidParams("weights must be positive");
    TargetModel t;
    t.name = "WPS(";
    for (std::size_t j = 0; j < w.size(); ++j) t.name += (j ? "," : "") + std::to_string(w[j]);
    t.name += ")";
    t.dim = static_cast<int>(w.size()) - 1;
    t.curve_rank = 1;
    t.c1_tangent = {std::accumulate(w.begin(), w.end(), 0L)};
    auto fs = detail::wps_fractions(w);
    for (const Rational& f : fs) {
        int fixed = 0;
        Rational top(1), age(0);
        for (long wj : w) {
            Rational fw = f * wj;
            if (is_integer(fw)) {
                ++fixed;
                top /= wj;
            } else {
                age += frac(fw);
            }
        }
        Rational partner = frac(1 - f);
        int pidx = static_cast<int>(std::find(fs.begin(), fs.end(), partner) - fs.begin());
        const int dim = fixed - 1;
        t.components.push_back({"f=" + f.get_str(), static_cast<int>(f.get_den().get_si()), age, pidx, detail::monomial_basis(dim),
                                detail::top_pairing(dim, top)});
    }
    return t;
}

inline TargetModel build_pn(int n) {
    if (n < 1) throw InvalidParams("P^n needs n >= 1");
    TargetModel t = build_wps(std::vector<long>(static_cast<std::size_t>(n + 1), 1));
    t.name = "P" + std::to_string(n);
    t.components[0].id = "1";
    return t;
}

/// Dispatch by kind: "point", "Bmu" (params {r}), "P" (params {n}), "WPS" (params = weights).
inline TargetModel build_target(const std::string& kind, const std::vector<long>& params = {}) {
    auto need = [&](std::size_t n) {
        if (params.size() != n) throw InvalidParams(kind + " expects " + std::to_string(n) + " parameter(s)");
    };
    if (kind == "point") return build_point();
    if (kind == "Bmu" || kind == "BmuR") return need(1), build_bmu(static_cast<int>(params[0]));
    if (kind == "P" || kind == "Pn") return need(1), build_pn(static_cast<int>(params[0]));
    if (kind == "WPS") return build_wps(params);
    throw InvalidParams("unknown target kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Bundles

/// Trivial bundle of the given rank: F_i^(0) = O^rank on every sector.
inline BundleModel trivial_bundle(const TargetModel& t, int rank) {
    BundleModel F;
    F.name = "O^" + std::to_string(rank);
    F.pulled_back = true;
    F.rank = rank;
    F.c1_pairing.assign(static_cast<std::size_t>(t.curve_rank), 0);
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
        std::vector<Rational> ch(t.component(i).basis.size());
        ch[0] = rank;
        F.eigen.push_back({i, 0, rank, ch});
    }
    F.lines.assign(static_cast<std::size_t>(rank), 0);
    return F;
}

/// Character j of mu_r on B mu_r: sector g^k acts by zeta_r^{jk}.
inline BundleModel character_bundle(const TargetModel& t, int j) {
    const int r = static_cast<int>(t.components.size());
    BundleModel F;
    F.name = "chi" + std::to_string(j);
    F.rank = 1;
    F.c1_pairing.assign(static_cast<std::size_t>(t.curve_rank), 0);
    bool pulled = true;
    for (int k = 0; k < r; ++k) {
        const int rk = t.component(k).r;
        const int l = static_cast<int>((((static_cast<long>(j) * k) % r + r) % r) * rk / r);
        if (l != 0) pulled = false;
        F.eigen.push_back({k, l, 1, {Rational(1)}});
    }
    F.pulled_back = pulled;
    return F;
}

/// O(a) on WPS(w): on the sector of f the generator acts by exp(2 pi i f a).
inline BundleModel wps_line_bundle(const std::vector<long>& w, const TargetModel& t, long a) {
    auto fs = detail::wps_fractions(w);
    BundleModel F;
    F.name = "O(" + std::to_string(a) + ")";
    F.rank = 1;
    F.c1_pairing = {a};
    bool pulled = true;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const Component& c = t.component(static_cast<int>(i));
        Rational phase = frac(fs[i] * a);
        const int l = static_cast<int>(to_long(phase * c.r));
        if (l != 0) pulled = false;
        F.eigen.push_back({static_cast<int>(i), l, 1, detail::exp_ch(a, c.dim())});
    }
    F.pulled_back = pulled;
    if (pulled) F.lines = {a};
    return F;
}

inline BundleModel pn_line_bundle(const TargetModel& t, long a) {
    BundleModel F;
    F.name = "O(" + std::to_string(a) + ")";
    F.rank = 1;
    F.pulled_back = true;
    F.c1_pairing = {a};
    F.eigen.push_back({0, 0, 1, detail::exp_ch(a, t.component(0).dim())});
    F.lines = {a};
    return F;
}

inline BundleModel direct_sum(const TargetModel& t, const BundleModel& A, const BundleModel& B) {
    BundleModel F;
    F.name = A.name + "+" + B.name;
    F.pulled_back = A.pulled_back && B.pulled_back;
    F.rank = A.rank + B.rank;
    F.c1_pairing = A.c1_pairing;
    for (std::size_t k = 0; k < F.c1_pairing.size() && k < B.c1_pairing.size(); ++k) F.c1_pairing[k] += B.c1_pairing[k];
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i)
        for (int l = 0; l < t.component(i).r; ++l) {
            const EigenPiece *a = A.piece(i, l), *b = B.piece(i, l);
            if (!a && !b) continue;
            EigenPiece p{i, l, 0, std::vector<Rational>(t.component(i).basis.size())};
            for (const EigenPiece* e : {a, b}) {
                if (!e) continue;
                p.rank += e->rank;
                for (std::size_t k = 0; k < p.ch.size() && k < e->ch.size(); ++k) p.ch[k] += e->ch[k];
            }
            F.eigen.push_back(p);
        }
    if (!A.lines.empty() && !B.lines.empty()) {
        F.lines = A.lines;
        F.lines.insert(F.lines.end(), B.lines.begin(), B.lines.end());
    }
    return F;
}

/// Target from a short spec: "point", "P4", "Bmu3", "Bmu(3)", "WPS(1,1,2)".
inline TargetModel target_from_spec(const std::string& spec) {
    auto numbers = [&](const std::string& body) {
        std::vector<long> out;
        std::string cur;
        for (char ch : body + ",") {
            if (ch == ',' || ch == ' ') {
                if (!cur.empty()) {
                    try {
                        out.push_back(std::stol(cur));
                    } catch (const std::exception&) {
                        throw InvalidParams("bad number '" + cur + "' in target spec '" + spec + "'");
                    }
                }
                cur.clear();
            } else
                cur += ch;
        }
        return out;
    };
    auto args = [&](std::size_t prefix) {
        std::string rest = spec.substr(prefix);
        if (!rest.empty() && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
        if (!rest.empty() && rest.front() == '_') rest = rest.substr(1);
        return numbers(rest);
    };
    if (spec == "point" || spec == "pt") return build_point();
    if (spec.rfind("WPS", 0) == 0) return build_wps(args(3));
    if (spec.rfind("Bmu", 0) == 0) return build_target("Bmu", args(3));
    if (spec.rfind("P", 0) == 0) return build_target("P", args(1));
    throw InvalidParams("unknown target spec '" + spec + "'");
}

/// Bundle from a short spec on a built-in target: "O(5)", "O5", "O(3)+O(3)", "chi1", "O^2".
inline BundleModel bundle_from_spec(const TargetModel& t, const std::string& spec, const std::vector<long>& wps_weights = {}) {
    const auto plus = spec.find('+');
    if (plus != std::string::npos)
        return direct_sum(t, bundle_from_spec(t, spec.substr(0, plus), wps_weights), bundle_from_spec(t, spec.substr(plus + 1), wps_weights));
    auto number = [&](std::string body) {
        if (!body.empty() && body.front() == '(' && body.back() == ')') body = body.substr(1, body.size() - 2);
        try {
            std::size_t used = 0;
            long v = std::stol(body, &used);
            if (used != body.size()) throw InvalidParams("");
            return v;
        } catch (const std::exception&) {
            throw InvalidParams("bad bundle spec '" + spec + "'");
        }
    };
    if (spec.rfind("chi", 0) == 0) return character_bundle(t, static_cast<int>(number(spec.substr(3))));
    if (spec.rfind("O^", 0) == 0) return trivial_bundle(t, static_cast<int>(number(spec.substr(2))));
    if (spec.rfind("O", 0) == 0) {
        const long a = number(spec.substr(1));
        if (!wps_weights.empty()) return wps_line_bundle(wps_weights, t, a);
        if (t.name.rfind("WPS(", 0) == 0) {
            std::vector<long> w;
            std::string cur;
            for (char ch : t.name.substr(4)) {
                if (ch == ',' || ch == ')') {
                    w.push_back(std::stol(cur));
                    cur.clear();
                } else
                    cur += ch;
            }
            return wps_line_bundle(w, t, a);
        }
        if (t.components.size() == 1 && t.dim > 0) return pn_line_bundle(t, a);
        if (a == 0) return trivial_bundle(t, 1);
        throw InvalidParams("line bundle O(" + std::to_string(a) + ") needs a projective target");
    }
    throw InvalidParams("unknown bundle spec '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Invariants

inline void validate_target(const TargetModel& t) {
    if (t.components.empty()) throw InvariantViolation("target has no components");
    const Component& c0 = t.components[0];
    if (c0.r != 1 || c0.age != 0 || c0.partner != 0) throw InvariantViolation("untwisted sector");
    if (c0.dim() != t.dim) throw InvariantViolation("untwisted sector dimension");
    const int n = static_cast<int>(t.components.size());
    for (int i = 0; i < n; ++i) {
        const Component& c = t.components[static_cast<std::size_t>(i)];
        if (c.r < 1) throw InvariantViolation("sector order: component " + c.id);
        if (c.age < 0) throw InvariantViolation("nonnegative age: component " + c.id);
        if (c.partner < 0 || c.partner >= n) throw InvariantViolation("involution: component " + c.id);
        const Component& p = t.components[static_cast<std::size_t>(c.partner)];
        if (p.partner != i) throw InvariantViolation("involution: component " + c.id);
        if (p.r != c.r) throw InvariantViolation("involution order: component " + c.id);
        if (p.basis.size() != c.basis.size()) throw InvariantViolation("involution dimension: component " + c.id);
        if (c.dim() > t.dim) throw InvariantViolation("component dimension: component " + c.id);
        for (std::size_t a = 0; a < c.basis.size(); ++a)
            if (c.basis[a].degree != 2 * static_cast<int>(a)) throw InvariantViolation("monomial basis: component " + c.id);
        if (c.age + p.age != Rational(t.dim - c.dim())) throw InvariantViolation("age reciprocity: component " + c.id);
        if (c.pairing.size() != c.basis.size()) throw InvariantViolation("pairing shape: component " + c.id);
        Matrix m = zero_matrix(c.basis.size());
        for (std::size_t a = 0; a < c.basis.size(); ++a) {
            if (c.pairing[a].size() != c.basis.size()) throw InvariantViolation("pairing shape: component " + c.id);
            for (std::size_t b = 0; b < c.basis.size(); ++b) {
                if (c.pairing[a][b] != p.pairing[b][a]) throw InvariantViolation("pairing symmetry: component " + c.id);
                m[a][b] = Scalar(c.pairing[a][b]);
            }
        }
        try {
            inverse(m);
        } catch (const NonInvertible&) {
            throw InvariantViolation("pairing nondegenerate: component " + c.id);
        }
    }
}

inline void validate_bundle(const TargetModel& t, const BundleModel& F) {
    std::set<std::pair<int, int>> seen;
    for (auto& e : F.eigen) {
        if (e.component < 0 || e.component >= static_cast<int>(t.components.size()))
            throw InvariantViolation("eigen component index in bundle " + F.name);
        const Component& c = t.component(e.component);
        if (e.l < 0 || e.l >= c.r) throw InvariantViolation("eigen index range in bundle " + F.name);
        if (!seen.insert({e.component, e.l}).second) throw InvariantViolation("duplicate eigen piece in bundle " + F.name);
        if (e.rank < 0) throw InvariantViolation("negative rank in bundle " + F.name);
        if (e.ch.size() > c.basis.size()) throw InvariantViolation("Chern character length in bundle " + F.name);
        if (!e.ch.empty() && e.ch[0] != e.rank) throw InvariantViolation("ch_0 equals rank in bundle " + F.name);
        if (F.pulled_back && e.l != 0 && e.rank != 0) throw InvariantViolation("pulled back from coarse space: bundle " + F.name);
    }
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
        const Component& c = t.component(i);
        int total = 0;
        for (int l = 0; l < c.r; ++l) total += eigen_rank(F, i, l);
        if (total != F.rank) throw InvariantViolation("eigen rank sum on component " + c.id + " of bundle " + F.name);
        for (int l = 0; l < c.r; ++l) {
            const int lp = l == 0 ? 0 : c.r - l;
            HPoly mine = eigen_ch(t, F, i, l), theirs = eigen_ch(t, F, c.partner, lp);
            if (mine != theirs || eigen_rank(F, i, l) != eigen_rank(F, c.partner, lp))
                throw InvariantViolation("bundle involution compatibility on component " + c.id + " of bundle " + F.name);
        }
    }
}

} // namespace orbiqrr
