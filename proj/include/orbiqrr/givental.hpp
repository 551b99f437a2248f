#pragma once

#include <functional>

#include "target.hpp"
#include "trunc_series.hpp"

namespace orbiqrr {

/// Element of H*(IX) tensor Laurent series in z over the Novikov ring, at finite precision.
using GiventalElement = TruncSeries<CohClass>;

/// Exact finite element sum a_n z^n (no Novikov variables beyond degree 0).
inline GiventalElement laurent_element(const TargetModel& t, const std::map<int, CohClass>& parts, int rank = 1, int max_degree = 0) {
    int lo = 0, hi = 0;
    for (auto& [n, c] : parts) {
        check_class(t, c);
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    GiventalElement e(rank, max_degree, lo, hi, true);
    for (auto& [n, c] : parts) e.set(Multidegree(static_cast<std::size_t>(rank), 0), n, c);
    return e;
}

/// H_+ part (n >= 0) and H_- part (n < 0).
inline GiventalElement positive_part(const GiventalElement& f) {
    GiventalElement r(f.rank(), f.max_degree(), std::max(0, f.zmin()), std::max(0, f.zmax()), f.upper_exact());
    for (auto& [k, v] : f.coefficients())
        if (k.second >= 0) r.set(k.first, k.second, v);
    return r;
}
inline GiventalElement negative_part(const GiventalElement& f) {
    GiventalElement r(f.rank(), f.max_degree(), f.zmin(), std::max(f.zmin(), std::min(-1, f.zmax())), true);
    for (auto& [k, v] : f.coefficients())
        if (k.second < 0) r.set(k.first, k.second, v);
    return r;
}

namespace detail {

using PairingFn = std::function<Scalar(const CohClass&, const CohClass&)>;

inline void require_partner_known(const GiventalElement& f, const GiventalElement& g) {
    for (auto& [k, v] : f.coefficients()) {
        if (v.is_zero()) continue;
        const int n = -1 - k.second;
        if (n >= g.zmin() && !g.upper_exact() && n > g.zmax())
            throw TruncationTooNarrow("residue pairing needs z^" + std::to_string(n) + " beyond the truncation z^" + std::to_string(g.zmax()));
    }
}

inline ScalarSeries residue_pairing(const GiventalElement& f, const GiventalElement& g, const PairingFn& pair) {
    if (f.rank() != g.rank()) throw InvalidParams("Novikov rank mismatch");
    require_partner_known(f, g);
    require_partner_known(g, f);
    ScalarSeries out(f.rank(), std::min(f.max_degree(), g.max_degree()), 0, 0, true);
    for (auto& [ka, a] : f.coefficients())
        for (auto& [kb, b] : g.coefficients()) {
            if (ka.second + kb.second != -1) continue;
            Multidegree d(ka.first);
            for (std::size_t i = 0; i < d.size(); ++i) d[i] += kb.first[i];
            if (total_degree(d) > out.max_degree()) continue;
            Scalar v = pair(a, b);
            if (ka.second % 2 != 0) v = -v;
            if (!v.is_zero()) out.add_to(d, 0, v);
        }
    return out;
}

} // namespace detail

/// Omega(f, g) = Res_{z=0} (f(-z), g(z))_orb dz, as a series in the Novikov variables.
inline ScalarSeries symplectic_form(const TargetModel& t, const GiventalElement& f, const GiventalElement& g) {
    return detail::residue_pairing(f, g, [&](const CohClass& a, const CohClass& b) { return orbifold_pairing(t, a, b); });
}

/// Omega with the (c, F)-twisted pairing.
inline ScalarSeries twisted_symplectic_form(const TargetModel& t, const BundleModel& F, const SValues& s, const GiventalElement& f,
                                            const GiventalElement& g) {
    CohClass c = invariant_char_class(t, F, s);
    return detail::residue_pairing(f, g, [&](const CohClass& a, const CohClass& b) { return orbifold_pairing(t, a * c, b); });
}

/// Multiplies every coefficient by a class.
inline GiventalElement multiply(const GiventalElement& f, const CohClass& c) {
    return f.map([&](const CohClass& v) { return v * c; });
}

/// q(z) = t(z) - 1 z.
inline GiventalElement dilaton_shift(const TargetModel& t, const GiventalElement& tvec) {
    GiventalElement shift = laurent_element(t, {{1, -CohClass::unit(t)}}, tvec.rank(), tvec.max_degree());
    return tvec + shift;
}

/// q(z) = sqrt(c((q^*F)^inv)) (t(z) - 1 z).
inline GiventalElement dilaton_shift(const TargetModel& t, const GiventalElement& tvec, const BundleModel& F, const SValues& s) {
    return multiply(dilaton_shift(t, tvec), invariant_char_class(t, F, s, Rational(1, 2)));
}

} // namespace orbiqrr
