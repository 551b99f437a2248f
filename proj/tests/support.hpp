#pragma once

#include <random>

#include "orbiqrr/builtin.hpp"

namespace orbiqrr::testing {

inline Rational random_rational(std::mt19937& rng, int bound = 6) {
    std::uniform_int_distribution<int> num(-bound, bound), den(1, bound);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

inline Matrix random_matrix(std::size_t n, std::mt19937& rng) {
    Matrix m = zero_matrix(n);
    for (auto& row : m)
        for (auto& x : row) x = Scalar(random_rational(rng));
    return m;
}

inline CohClass random_class(const TargetModel& t, std::mt19937& rng) {
    std::vector<Scalar> v;
    for (std::size_t k = 0; k < t.size(); ++k) v.push_back(Scalar(random_rational(rng)));
    return CohClass::from_vector(t, v);
}

/// Random bundle of the given rank satisfying the eigen-rank and involution invariants.
inline BundleModel random_bundle(const TargetModel& t, std::mt19937& rng, int rank) {
    BundleModel F;
    F.name = "random";
    F.rank = rank;
    F.c1_pairing.assign(static_cast<std::size_t>(t.curve_rank), 0);
    auto add = [&](int i, int l, const std::vector<Rational>& ch) {
        for (auto& e : F.eigen)
            if (e.component == i && e.l == l) {
                e.rank += to_long(ch[0]);
                for (std::size_t k = 0; k < ch.size(); ++k) e.ch[k] += ch[k];
                return;
            }
        F.eigen.push_back({i, l, static_cast<int>(to_long(ch[0])), ch});
    };
    auto random_ch = [&](int i, int r) {
        std::vector<Rational> ch(t.component(i).basis.size());
        ch[0] = r;
        for (std::size_t k = 1; k < ch.size(); ++k) ch[k] = random_rational(rng);
        return ch;
    };
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
        const Component& c = t.component(i);
        if (c.partner < i) continue;
        std::uniform_int_distribution<int> pick(0, c.r - 1);
        int left = rank;
        while (left > 0) {
            const int l = pick(rng);
            const int lp = l == 0 ? 0 : c.r - l;
            if (c.partner != i) {
                auto ch = random_ch(i, 1);
                add(i, l, ch);
                add(c.partner, lp, ch);
                --left;
            } else if (l == lp) {
                add(i, l, random_ch(i, 1));
                --left;
            } else if (left >= 2) {
                auto ch = random_ch(i, 1);
                add(i, l, ch);
                add(i, lp, ch);
                left -= 2;
            }
        }
    }
    F.pulled_back = std::all_of(F.eigen.begin(), F.eigen.end(), [](const EigenPiece& e) { return e.l == 0; });
    validate_bundle(t, F);
    return F;
}

/// s_0 in {0, ell} and random rational s_1 .. s_kmax.
inline SValues random_s_values(std::mt19937& rng, int kmax, bool with_log) {
    SValues s;
    s.values.push_back(with_log ? Scalar::ell() : Scalar());
    for (int k = 1; k <= kmax; ++k) s.values.push_back(Scalar(random_rational(rng)));
    return s;
}

} // namespace orbiqrr::testing
