#pragma once

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "bernoulli.hpp"
#include "givental.hpp"
#include "loopops.hpp"

namespace orbiqrr {

/// s^v_k = (-1)^{k+1} s_k.
inline SValues dual_s_values(const SValues& s) {
    if (s.euler) throw InvalidParams("dual_s_values needs a finite s list; materialize the Euler values first");
    SValues r;
    for (std::size_t k = 0; k < s.values.size(); ++k) r.values.push_back(k % 2 ? s.values[k] : -s.values[k]);
    return r;
}

/// Finite list of the first kmax + 1 values of s, with the Euler tail made explicit.
inline SValues materialize(const SValues& s, int kmax) {
    SValues r;
    for (int k = 0; k <= kmax; ++k) r.values.push_back(s.at(k));
    return r;
}

/// s list plus a phase: s_0 is shifted by pi_shift * pi sqrt(-1).
struct PhasedSValues {
    SValues values;
    Rational pi_shift;
};

/// Parameters of the inverse equivariant Euler class: s*_k = (-1)^{k+1} s_k, s*_0 = -s_0 - pi sqrt(-1).
inline PhasedSValues inverse_euler_s_values(int kmax, bool include_log = true) {
    return {dual_s_values(materialize(euler_s_values(kmax, include_log), kmax)), Rational(-1)};
}

/// exp(pi sqrt(-1) x) for rational x as an exact root of unity.
inline Scalar exp_pi_i(const Rational& x) {
    Rational r = x;
    r.canonicalize();
    const long q = to_long(Rational(r.get_den()));
    long p = to_long(Rational(r.get_num())) % (2 * q);
    if (p < 0) p += 2 * q;
    return Scalar::root_of_unity(static_cast<int>(2 * q), p);
}

/// c((q^*F)^inv) for a phased s list: the s_0 phase contributes exp(pi_shift pi sqrt(-1) rank F^inv_i).
inline CohClass phased_char_class(const TargetModel& t, const BundleModel& F, const PhasedSValues& s) {
    std::vector<HPoly> parts;
    const CohClass base = invariant_char_class(t, F, s.values);
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
        HPoly p = base.part(i);
        const Scalar phase = exp_pi_i(s.pi_shift * Rational(eigen_rank(F, i, 0)));
        for (auto& c : p) c *= phase;
        parts.push_back(p);
    }
    return CohClass(std::move(parts));
}

/// F^v: eigen index l -> r_i - l (0 stays 0), ch_k -> (-1)^k ch_k, degrees negated.
inline BundleModel dual_bundle(const TargetModel& t, const BundleModel& F) {
    BundleModel D = F;
    const std::string suffix = "^v";
    if (F.name.size() >= suffix.size() && F.name.compare(F.name.size() - suffix.size(), suffix.size(), suffix) == 0)
        D.name = F.name.substr(0, F.name.size() - suffix.size());
    else
        D.name = F.name + suffix;
    for (auto& c : D.c1_pairing) c = -c;
    for (auto& a : D.lines) a = -a;
    for (auto& e : D.eigen) {
        const int r = t.component(e.component).r;
        e.l = e.l == 0 ? 0 : r - e.l;
        for (std::size_t k = 1; k < e.ch.size(); k += 2) e.ch[k] = -e.ch[k];
    }
    return D;
}

/// t^v(z) = c((q^*F)^inv) t(z) + (1 - c((q^*F)^inv)) z.
inline GiventalElement dual_variable_map(const TargetModel& t, const BundleModel& F, const SValues& s, const GiventalElement& tvec) {
    const CohClass c = invariant_char_class(t, F, s);
    const CohClass one = CohClass::unit(t);
    GiventalElement r = tvec.map([&](const CohClass& v) { return v * c; });
    const GiventalElement shift = laurent_element(t, {{1, one - one * c}}, tvec.rank(), tvec.max_degree());
    return r + shift;
}

// ---------------------------------------------------------------------------

/// Exponent (1/2) rank F_i^mov - age(F_i) of the sign multiplier on component i.
inline Rational serre_sign_exponent(const TargetModel& t, const BundleModel& F, int i) {
    Rational e = Rational(moving_rank(t, F, i), 2) - age_of_bundle(t, F, i);
    e.canonicalize();
    return e;
}

/// M = (-1)^{rank F_i^mov / 2 - age(F_i)} on each component, as a constant class.
/// With max_order > 0 every root of unity must lie in Q(zeta_max_order).
inline CohClass serre_M_operator(const TargetModel& t, const BundleModel& F, int max_order = 0) {
    std::vector<HPoly> parts;
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
        const Scalar m = exp_pi_i(serre_sign_exponent(t, F, i));
        const int order = m.cyclo_order();
        if (max_order > 0 && max_order % order != 0)
            throw CyclotomicOrderTooSmall("component " + t.component(i).id + " needs zeta" + std::to_string(order) + ", not in Q(zeta" +
                                          std::to_string(max_order) + ")");
        HPoly p(t.component(i).basis.size());
        p[0] = m;
        parts.push_back(p);
    }
    return CohClass(std::move(parts));
}

/// Q^d -> (-1)^{<c1(F), d>} Q^d.
template <class T>
TruncSeries<T> novikov_sign_twist(const TruncSeries<T>& f, const BundleModel& F) {
    if (f.rank() > 0 && static_cast<int>(F.c1_pairing.size()) != f.rank())
        throw InvalidParams("bundle pairs with " + std::to_string(F.c1_pairing.size()) + " curve classes, series has " + std::to_string(f.rank()));
    TruncSeries<T> r(f.rank(), f.max_degree(), f.zmin(), f.zmax(), f.upper_exact());
    for (auto& [k, v] : f.coefficients()) {
        long pairing = 0;
        for (std::size_t j = 0; j < k.first.size(); ++j) pairing += F.c1_pairing[j] * k.first[j];
        r.set(k.first, k.second, pairing % 2 ? v * Scalar(-1) : v);
    }
    return r;
}

// ---------------------------------------------------------------------------

/// A^v_m - (-1)^{m+h} A_m in each degree h. For m = 1 both sides include ch(F^(0))/2,
/// which absorbs the B_1 anomaly; without it the m = 1 residual is -ch(F^(0)) up to sign.
inline CohClass dual_am_residual(const TargetModel& t, const BundleModel& F, int m, bool with_anomaly_term = true) {
    const BundleModel Fv = dual_bundle(t, F);
    CohClass a = class_Am(t, F, m), av = class_Am(t, Fv, m);
    if (m == 1 && with_anomaly_term) {
        std::vector<HPoly> extra, extra_v;
        for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
            HPoly e = eigen_ch(t, F, i, 0), ev = eigen_ch(t, Fv, i, 0);
            for (auto& x : e) x *= Scalar(Rational(1, 2));
            for (auto& x : ev) x *= Scalar(Rational(1, 2));
            extra.push_back(e);
            extra_v.push_back(ev);
        }
        a = a + CohClass(std::move(extra));
        av = av + CohClass(std::move(extra_v));
    }
    std::vector<HPoly> parts;
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) {
        HPoly p(t.component(i).basis.size());
        for (std::size_t h = 0; h < p.size(); ++h) {
            const Scalar x = a.get(i, static_cast<int>(h));
            p[h] = av.get(i, static_cast<int>(h)) - ((m + static_cast<int>(h)) % 2 ? -x : x);
        }
        parts.push_back(p);
    }
    return CohClass(std::move(parts));
}

// ---------------------------------------------------------------------------

struct SerreConeReport {
    bool holds = false;
    int checked_through = 0;
    std::map<int, bool> degree_ok;   // z-degree -> residual vanishes
    bool char_classes_inverse = false;  // c^v((F^v)^inv) c(F^inv) = 1
};

/// Compares the twisted-coordinate cone maps of (c, F) and (c^v, F^v):
/// c^v-side delta equals c((q^*F)^inv) times the c-side delta, degree by degree in z.
inline SerreConeReport check_serre_cone(const TargetModel& t, const BundleModel& F, const SValues& s, int zmax) {
    if (zmax < 0) throw TruncationTooNarrow("serre cone check needs zmax >= 0");
    const BundleModel Fv = dual_bundle(t, F);
    const SValues sv = dual_s_values(s);
    const CohClass c = invariant_char_class(t, F, s);
    const CohClass cv = invariant_char_class(t, Fv, sv);

    const auto mult = [&](const CohClass& x) { return loop_operator({{0, multiplication_matrix(t, x)}}); };
    const LoopOperator D = mult(invariant_char_class(t, F, s, Rational(-1, 2))) * delta_operator(t, F, s, zmax);
    const LoopOperator Dv = mult(invariant_char_class(t, Fv, sv, Rational(-1, 2))) * delta_operator(t, Fv, sv, zmax);
    const LoopOperator R = Dv - mult(c) * D;

    SerreConeReport rep;
    rep.char_classes_inverse = (c * cv) == CohClass::ones(t);
    const int last = std::min(zmax, R.zmax());
    if (!R.upper_exact() && R.zmax() < zmax)
        throw TruncationTooNarrow("serre cone residual known through z^" + std::to_string(R.zmax()) + " only");
    rep.checked_through = last;
    for (int n = std::min(0, R.zmin()); n <= last; ++n) rep.degree_ok[n] = true;
    for (auto& [k, v] : R.coefficients())
        if (k.second <= last && !orbiqrr::is_zero(v.matrix(t.size()))) rep.degree_ok[k.second] = false;
    rep.holds = rep.char_classes_inverse && std::all_of(rep.degree_ok.begin(), rep.degree_ok.end(), [](auto& kv) { return kv.second; });
    return rep;
}

}  // namespace orbiqrr
