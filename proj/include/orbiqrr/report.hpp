#pragma once

#include <json.hpp>

#include "correlators.hpp"
#include "genus0.hpp"
#include "loopops.hpp"
#include "serre.hpp"

namespace orbiqrr {

using Json = nlohmann::json;

/// Rationals as canonical "p/q" strings; other scalars in the syntax read back by parse_scalar.
inline Json scalar_json(const Scalar& s) { return s.is_rational() ? Json(s.rational().get_str()) : Json(s.to_string()); }

inline Json degree_json(const Multidegree& d) { return d.size() == 1 ? Json(d[0]) : Json(d); }

/// Sparse rows {d, zpow, coeff} of a scalar series.
inline Json series_rows(const ScalarSeries& s) {
    Json rows = Json::array();
    for (auto& [k, v] : s.coefficients()) rows.push_back({{"d", degree_json(k.first)}, {"zpow", k.second}, {"coeff", scalar_json(v)}});
    return rows;
}

/// Rows {zpow, row_component, row_basis, col_component, col_basis, coeff} of the nonzero blocks.
inline Json loop_operator_json(const TargetModel& t, const LoopOperator& M) {
    Json rows = Json::array();
    for (auto& [k, v] : M.coefficients()) {
        const Matrix m = v.matrix(t.size());
        for (std::size_t a = 0; a < m.size(); ++a)
            for (std::size_t b = 0; b < m.size(); ++b) {
                if (m[a][b].is_zero()) continue;
                auto [i, x] = t.locate(a);
                auto [j, y] = t.locate(b);
                rows.push_back({{"zpow", k.second},
                                {"row_component", t.component(i).id},
                                {"row_basis", x},
                                {"col_component", t.component(j).id},
                                {"col_basis", y},
                                {"coeff", scalar_json(m[a][b])}});
            }
    }
    return {{"zmin", M.zmin()}, {"zmax", M.zmax()}, {"upper_exact", M.upper_exact()}, {"rows", rows}};
}

inline Json symplectic_report_json(const SymplecticReport& r) {
    Json j{{"holds", r.holds}, {"all_orders", r.all_orders}, {"checked_through", r.checked_through}, {"max_vanishing_degree", r.max_vanishing_degree}};
    if (r.first_failure) {
        j["first_failure"] = *r.first_failure;
        j["offending_block"] = r.offending_block;
    }
    return j;
}

inline Json mirror_json(const MirrorResult& m) {
    Json tau = Json::object();
    for (auto& [g, s] : m.tau) {
        auto [i, a] = m.J.target.locate(g);
        tau[m.J.target.component(i).id + ":" + std::to_string(a)] = series_rows(s);
    }
    Json G = Json::object();
    for (auto& [g, s] : m.expansion.G) {
        auto [i, a] = m.J.target.locate(g);
        G[m.J.target.component(i).id + ":" + std::to_string(a)] = series_rows(s);
    }
    return {{"F", series_rows(m.expansion.F)}, {"G", G}, {"tau", tau}, {"J", j_function_rows(m.J)}};
}

inline Json invariants_json(const InvariantTable& tab) {
    Json rows = Json::array();
    for (auto& [d, N] : tab.N) rows.push_back({{"d", d}, {"N", N.get_str()}, {"n", tab.n.at(d).get_str()}});
    return rows;
}

inline Json universal_report_json(const UniversalReport& r) {
    Json failures = Json::array();
    for (auto& f : r.failures) failures.push_back({{"instance", f.instance}, {"n", f.n}, {"residual", scalar_json(f.residual)}});
    return {{"kind", r.kind}, {"checked", r.checked}, {"vacuous", r.vacuous}, {"ok", r.ok()}, {"failures", failures}};
}

inline Json serre_report_json(const SerreConeReport& r) {
    Json degrees = Json::array();
    for (auto& [n, ok] : r.degree_ok) degrees.push_back({{"zpow", n}, {"ok", ok}});
    return {{"holds", r.holds}, {"checked_through", r.checked_through}, {"char_classes_inverse", r.char_classes_inverse}, {"rows", degrees}};
}

inline Json error_json(const Error& e) { return {{"error", e.name()}, {"module", e.module()}, {"message", e.what()}}; }

} // namespace orbiqrr
