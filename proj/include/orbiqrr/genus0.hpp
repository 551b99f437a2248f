#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "givental.hpp"
#include "scalar_parse.hpp"

namespace orbiqrr {

/// J(t, z) on the small parameter space t = t0 1 + t1 p, in factored form
/// J = exp(t0 / z) body(q, z) with q = Q exp(t1). The factor exp(t1 p / z) is nilpotent in
/// p and is expanded into the body; exp(t0 / z) is never expanded.
struct JFunction {
    TargetModel target;
    Scalar t0;
    Scalar t1;
    GiventalElement body;

    int max_degree() const { return body.max_degree(); }
    /// Coefficient of q^d z^n in the body.
    CohClass coefficient(const Multidegree& d, int n) const { return body.at(d, n); }
    CohClass coefficient(int d, int n) const { return body.at(Multidegree{d}, n); }
    /// The part of the body of Novikov degree d.
    GiventalElement degree_part(const Multidegree& d) const {
        GiventalElement r(body.rank(), body.max_degree(), body.zmin(), body.zmax(), body.upper_exact());
        for (auto& [k, v] : body.coefficients())
            if (k.first == d) r.set(k.first, k.second, v);
        return r;
    }
    /// Component J_i of the coefficient of q^d z^n.
    HPoly component(int i, const Multidegree& d, int n) const {
        CohClass c = coefficient(d, n);
        return c.has_shape() ? c.part(i) : HPoly(target.component(i).basis.size());
    }
};

namespace detail {

/// Class equal to 1 on every component; it multiplies component-wise as the identity.
inline CohClass ones_class(const TargetModel& t) {
    CohClass c = CohClass::zero(t);
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i) c.at(i, 0) = Scalar(1);
    return c;
}

/// The class h^1 on every component of positive dimension.
inline CohClass hyperplane_class(const TargetModel& t) {
    CohClass c = CohClass::zero(t);
    for (int i = 0; i < static_cast<int>(t.components.size()); ++i)
        if (t.component(i).dim() >= 1) c.at(i, 1) = Scalar(1);
    return c;
}

inline Multidegree zero_degree(int rank) { return Multidegree(static_cast<std::size_t>(rank), 0); }

/// Exact element c0 + c1 z at Novikov degree 0.
inline GiventalElement linear_in_z(const CohClass& c0, const CohClass& c1, int rank, int D) {
    GiventalElement e(rank, D, 0, 1, true);
    e.set(zero_degree(rank), 0, c0);
    e.set(zero_degree(rank), 1, c1);
    return e;
}

/// exp(a p / z) with p nilpotent.
inline GiventalElement exp_divisor_over_z(const TargetModel& t, const Scalar& a, int rank, int D) {
    const CohClass p = hyperplane_class(t);
    std::map<int, CohClass> parts;
    CohClass term = ones_class(t);
    parts[0] = term;
    for (int k = 1; k <= t.dim; ++k) {
        term = term * p * (a / Scalar(k));
        if (term.is_zero()) break;
        parts[-k] = term;
    }
    int lo = 0;
    for (auto& [n, c] : parts) lo = std::min(lo, n);
    GiventalElement e(rank, D, lo, 0, true);
    for (auto& [n, c] : parts) e.set(zero_degree(rank), n, c);
    return e;
}

/// Scalar Novikov series lifted to an element acting by multiplication.
inline GiventalElement lift_scalar_series(const TargetModel& t, const ScalarSeries& s) {
    GiventalElement e(s.rank(), s.max_degree(), 0, 0, true);
    const CohClass one = ones_class(t);
    for (auto& [k, v] : s.coefficients()) {
        if (k.second != 0) throw InvalidParams("expected a z-free Novikov series");
        e.set(k.first, 0, one * v);
    }
    return e;
}

inline std::string index_string(const TargetModel& t, const Multidegree& d, int n, std::size_t g) {
    auto [i, a] = t.locate(g);
    return "Q^" + degree_string(d) + " z^" + std::to_string(n) + " component " + t.component(i).id + " basis " + std::to_string(a);
}

} // namespace detail

/// Checks J = z + t + O(1/z) on the degree-zero part (or every degree with `all_degrees`)
/// and that no power of z above 1 occurs.
inline void validate_normal_form(const JFunction& J, bool all_degrees = false) {
    const TargetModel& t = J.target;
    const int rank = J.body.rank();
    const CohClass unit = CohClass::unit(t);
    CohClass head = CohClass::zero(t);
    if (!J.t1.is_zero()) head = head + CohClass::basis(t, 0, 1) * J.t1;
    for (auto& [k, v] : J.body.coefficients())
        if (k.second > 1) throw NormalFormViolation("term at " + detail::index_string(t, k.first, k.second, 0) + " above z^1");
    if (!J.body.upper_exact() && J.body.zmax() < 1) throw NormalFormViolation("J is not known through z^1");
    auto check = [&](const Multidegree& d) {
        const bool base = d == detail::zero_degree(rank);
        if (!(J.body.at(d, 1) == (base ? unit : CohClass())))
            throw NormalFormViolation("z^1 coefficient at Q^" + degree_string(d) + " is " + (base ? "not the unit" : "nonzero"));
        if (!(J.body.at(d, 0) == (base ? head : CohClass())))
            throw NormalFormViolation("z^0 coefficient at Q^" + degree_string(d) + " differs from t");
    };
    check(detail::zero_degree(rank));
    if (all_degrees) {
        std::set<Multidegree> seen;
        for (auto& [k, v] : J.body.coefficients())
            if (seen.insert(k.first).second && k.first != detail::zero_degree(rank)) check(k.first);
    }
}

/// Rejects rational coefficients of q^d z^n phi with 2 <c1, d> + 2n + deg phi != 2.
inline void validate_dimension_filter(const JFunction& J) {
    const TargetModel& t = J.target;
    if (t.c1_tangent.empty()) return;
    for (auto& [k, v] : J.body.coefficients()) {
        long c1 = 0;
        for (std::size_t j = 0; j < k.first.size() && j < t.c1_tangent.size(); ++j) c1 += t.c1_tangent[j] * k.first[j];
        const std::vector<Scalar> coords = v.to_vector();
        for (std::size_t g = 0; g < coords.size(); ++g) {
            if (coords[g].is_zero() || !coords[g].is_constant()) continue;
            auto [i, a] = t.locate(g);
            if (Rational(2 * c1 + 2 * k.second) + t.orbifold_degree(i, a) != 2)
                throw NormalFormViolation("entry at " + detail::index_string(t, k.first, k.second, g) + " violates the dimension constraint");
        }
    }
}

/// z exp((t0 + t1 p) / z) sum_d Q^d exp(d t1) / prod_{k=1}^d (p + kz)^{n+1} on P^n.
inline JFunction j_closed_form_Pn(int n, const Scalar& t0, const Scalar& t1, int max_degree) {
    if (n < 1) throw InvalidParams("j_closed_form_Pn: n must be at least 1");
    if (max_degree < 0) throw InvalidParams("j_closed_form_Pn: negative degree cutoff");
    JFunction J{build_pn(n), t0, t1, {}};
    const TargetModel& t = J.target;
    const CohClass one = detail::ones_class(t), p = detail::hyperplane_class(t);
    GiventalElement sum(1, max_degree, 0, 0, true);
    GiventalElement prod = GiventalElement::constant(one, 1, max_degree);
    sum += prod;
    for (int d = 1; d <= max_degree; ++d) {
        // 1 / (p + d z) = sum_j (-p)^j / (d z)^{j+1}
        std::map<int, CohClass> inv;
        CohClass term = one * Scalar(Rational(1, d));
        for (int j = 0; j <= n && !term.is_zero(); ++j) {
            inv[-1 - j] = term;
            term = -(term * p) * Scalar(Rational(1, d));
        }
        GiventalElement factor(1, max_degree, inv.begin()->first, -1, true);
        for (auto& [e, c] : inv) factor.set(Multidegree{0}, e, c);
        for (int k = 0; k <= n; ++k) prod *= factor;
        GiventalElement monomial(1, max_degree, 0, 0, true);
        monomial.set(Multidegree{d}, 0, one);
        sum += prod * monomial;
    }
    J.body = (sum * detail::exp_divisor_over_z(t, t1, 1, max_degree)).shifted(1);
    return J;
}

/// Reads rows {d, zpow, component, basis, coeff} of the body at t = 0.
inline JFunction load_j_function(const TargetModel& t, const nlohmann::json& data) {
    using nlohmann::json;
    const json* rows = &data;
    int D = -1;
    bool declared = false;
    if (data.is_object()) {
        if (!data.contains("rows")) throw SchemaError("$.rows: missing field");
        rows = &data["rows"];
        if (data.contains("max_degree")) {
            if (!data["max_degree"].is_number_integer()) throw SchemaError("$.max_degree: expected an integer");
            D = data["max_degree"].get<int>();
            declared = true;
        }
    }
    if (!rows->is_array()) throw SchemaError("$.rows: expected an array");
    const int rank = t.curve_rank;
    struct Row {
        Multidegree d;
        int z;
        int comp;
        int basis;
        Scalar c;
    };
    std::vector<Row> parsed;
    int zmin = 0;
    for (std::size_t r = 0; r < rows->size(); ++r) {
        const std::string p = "$.rows[" + std::to_string(r) + "]";
        const json& row = (*rows)[r];
        if (!row.is_object()) throw SchemaError(p + ": expected an object");
        for (const char* key : {"d", "zpow", "component", "basis", "coeff"})
            if (!row.contains(key)) throw SchemaError(p + "." + key + ": missing field");
        Row x;
        if (row["d"].is_number_integer())
            x.d = Multidegree{row["d"].get<int>()};
        else if (row["d"].is_array()) {
            for (auto& v : row["d"]) {
                if (!v.is_number_integer()) throw SchemaError(p + ".d: expected integers");
                x.d.push_back(v.get<int>());
            }
        } else
            throw SchemaError(p + ".d: expected an integer or an array");
        if (static_cast<int>(x.d.size()) != rank) throw SchemaError(p + ".d: Novikov rank mismatch");
        for (int v : x.d)
            if (v < 0) throw SchemaError(p + ".d: negative degree");
        if (!row["zpow"].is_number_integer()) throw SchemaError(p + ".zpow: expected an integer");
        x.z = row["zpow"].get<int>();
        if (!row["component"].is_string()) throw SchemaError(p + ".component: expected a component id");
        try {
            x.comp = t.find_component(row["component"].get<std::string>());
        } catch (const IndexOutOfRange&) {
            throw SchemaError(p + ".component: unknown component");
        }
        if (!row["basis"].is_number_integer()) throw SchemaError(p + ".basis: expected an integer");
        x.basis = row["basis"].get<int>();
        if (x.basis < 0 || x.basis > t.component(x.comp).dim()) throw SchemaError(p + ".basis: out of range");
        if (!row["coeff"].is_string() && !row["coeff"].is_number_integer()) throw SchemaError(p + ".coeff: expected a string");
        try {
            x.c = row["coeff"].is_string() ? parse_scalar(row["coeff"].get<std::string>()) : Scalar(row["coeff"].get<long>());
        } catch (const ParseError& e) {
            throw SchemaError(p + ".coeff: " + e.what());
        }
        if (x.z > 1) throw NormalFormViolation(p + ": power z^" + std::to_string(x.z) + " above z^1");
        zmin = std::min(zmin, x.z);
        if (!declared) D = std::max(D, total_degree(x.d));
        parsed.push_back(x);
    }
    if (D < 0) D = 0;
    JFunction J{t, Scalar(), Scalar(), GiventalElement(rank, D, zmin, 1, true)};
    for (auto& x : parsed) {
        if (total_degree(x.d) > D) throw SchemaError("row degree exceeds max_degree");
        CohClass c = CohClass::basis(t, x.comp, x.basis) * x.c;
        J.body.add_to(x.d, x.z, c);
    }
    validate_normal_form(J);
    validate_dimension_filter(J);
    return J;
}

/// Rows {d, zpow, component, basis, coeff} of the body.
inline nlohmann::json j_function_rows(const JFunction& J) {
    nlohmann::json rows = nlohmann::json::array();
    for (auto& [k, v] : J.body.coefficients()) {
        const std::vector<Scalar> coords = v.to_vector();
        for (std::size_t g = 0; g < coords.size(); ++g) {
            if (coords[g].is_zero()) continue;
            auto [i, a] = J.target.locate(g);
            nlohmann::json d = k.first.size() == 1 ? nlohmann::json(k.first[0]) : nlohmann::json(k.first);
            rows.push_back({{"d", d}, {"zpow", k.second}, {"component", J.target.component(i).id}, {"basis", a}, {"coeff", coords[g].to_string()}});
        }
    }
    return {{"max_degree", J.max_degree()}, {"rows", rows}};
}

/// <rho_j, d> for the split summands; Chern roots are lines[j] h with <h, d> = d.
inline std::vector<long> line_degrees(const BundleModel& F, const Multidegree& d) {
    std::vector<long> out;
    for (long a : F.lines) out.push_back(a * d.at(0));
    return out;
}

/// I_d = J_d prod_j prod_{k=1}^{<rho_j, d>} (lambda + rho_j + k z).
inline JFunction hypergeometric_modification(const JFunction& J, const BundleModel& F) {
    const TargetModel& t = J.target;
    if (!F.pulled_back) throw AssumptionViolated("bundle " + F.name + " is not pulled back from the coarse space");
    if (F.rank > 0 && static_cast<int>(F.lines.size()) != F.rank) throw AssumptionViolated("bundle " + F.name + " is not given as a sum of lines");
    if (F.rank > 0 && t.curve_rank != 1) throw AssumptionViolated("hypergeometric modification needs a single Novikov variable");
    const CohClass one = detail::ones_class(t), h = detail::hyperplane_class(t);
    const int rank = J.body.rank(), D = J.max_degree();

    std::set<Multidegree> degrees;
    for (auto& [k, v] : J.body.coefficients()) degrees.insert(k.first);
    int zmax = J.body.zmax();
    std::vector<GiventalElement> parts;
    for (const Multidegree& d : degrees) {
        GiventalElement part = J.degree_part(d);
        if (F.rank > 0) {
            std::vector<long> rho = line_degrees(F, d);
            for (std::size_t j = 0; j < rho.size(); ++j) {
                if (rho[j] < 0)
                    throw AssumptionViolated("negative pairing <rho_" + std::to_string(j) + ", d> = " + std::to_string(rho[j]) + " at Q^" + degree_string(d));
                for (long k = 1; k <= rho[j]; ++k)
                    part *= detail::linear_in_z(one * Scalar::lambda() + h * Scalar(F.lines[j]), one * Scalar(k), rank, D);
            }
        }
        if (J.body.upper_exact())
            for (auto& [k, v] : part.coefficients()) zmax = std::max(zmax, k.second);
        else
            zmax = std::min(zmax, part.zmax());
        parts.push_back(part);
    }
    JFunction I{t, J.t0, J.t1, GiventalElement(rank, D, J.body.zmin(), zmax, J.body.upper_exact())};
    for (auto& part : parts)
        for (auto& [k, v] : part.coefficients()) I.body.add_to(k.first, k.second, v);
    return I;
}

/// lambda := 0 coefficient-wise.
inline JFunction nonequivariant_limit(const JFunction& J) {
    JFunction r{J.target, J.t0.nonequiv_limit(), J.t1.nonequiv_limit(),
                GiventalElement(J.body.rank(), J.body.max_degree(), J.body.zmin(), J.body.zmax(), J.body.upper_exact())};
    for (auto& [k, v] : J.body.coefficients()) {
        std::vector<Scalar> coords = v.to_vector();
        for (std::size_t g = 0; g < coords.size(); ++g) {
            try {
                coords[g] = coords[g].nonequiv_limit();
            } catch (const PoleAtZero& e) {
                throw PoleAtZero(std::string(e.what()) + " at " + detail::index_string(J.target, k.first, k.second, g));
            } catch (const LogObstruction& e) {
                throw LogObstruction(std::string(e.what()) + " at " + detail::index_string(J.target, k.first, k.second, g));
            }
        }
        r.body.set(k.first, k.second, CohClass::from_vector(J.target, coords));
    }
    return r;
}

/// I = z F + sum_k G^k gamma_k + O(1/z), gamma_k ranging over classes of degree <= 2.
struct SmallExpansion {
    ScalarSeries F;
    std::map<std::size_t, ScalarSeries> G;  // global basis index -> series
};

inline SmallExpansion small_expansion(const JFunction& I) {
    const TargetModel& t = I.target;
    const int rank = I.body.rank(), D = I.max_degree();
    if (!I.body.upper_exact() && I.body.zmax() < 1) throw TruncationTooNarrow("I is not known through z^1");
    SmallExpansion out{ScalarSeries(rank, D, 0, 0, true), {}};
    std::vector<std::size_t> small;
    for (std::size_t g = 0; g < t.size(); ++g) {
        auto [i, a] = t.locate(g);
        if (t.orbifold_degree(i, a) <= 2) {
            small.push_back(g);
            out.G.emplace(g, ScalarSeries(rank, D, 0, 0, true));
        }
    }
    for (auto& [k, v] : I.body.coefficients()) {
        if (k.second >= 2)
            throw PositivityViolated("term at " + detail::index_string(t, k.first, k.second, 0) + ": c1(F) exceeds c1(T) and z^" +
                                     std::to_string(k.second) + " survives");
        if (k.second < 0) continue;
        const std::vector<Scalar> coords = v.to_vector();
        for (std::size_t g = 0; g < coords.size(); ++g) {
            if (coords[g].is_zero()) continue;
            if (k.second == 1) {
                if (g != 0) throw PositivityViolated("z^1 term off the unit at " + detail::index_string(t, k.first, 1, g));
                out.F.add_to(k.first, 0, coords[g]);
            } else {
                auto it = out.G.find(g);
                if (it == out.G.end()) throw PositivityViolated("z^0 term of degree above 2 at " + detail::index_string(t, k.first, 0, g));
                it->second.add_to(k.first, 0, coords[g]);
            }
        }
    }
    // exp(t0 / z) (z F + G + ...) = z F + (G + t0 F) + ...
    if (!I.t0.is_zero()) out.G.at(0) += out.F.scaled(I.t0);
    const Scalar f0 = out.F.at(detail::zero_degree(rank), 0);
    if (f0.is_zero()) throw NonUnitConstantTerm("z^1 head F(t) is not a unit");
    return out;
}

struct MirrorResult {
    SmallExpansion expansion;
    std::map<std::size_t, ScalarSeries> tau;  // tau = sum_k (G^k / F) gamma_k
    JFunction J;                              // J(tau) = I / F
};

inline MirrorResult mirror_map(const JFunction& I) {
    MirrorResult r{small_expansion(I), {}, I};
    const ScalarSeries Finv = series_invert(r.expansion.F);
    for (auto& [g, G] : r.expansion.G) r.tau.emplace(g, G * Finv);
    r.J.body = I.body * detail::lift_scalar_series(I.target, Finv);
    // Re-validate: z^1 coefficient is the unit and z^0 is tau minus the factored t0.
    for (auto& [k, v] : r.J.body.coefficients()) {
        if (k.second > 1) throw NormalFormViolation("z^" + std::to_string(k.second) + " term after division by F");
        if (k.second < 0) continue;
        const std::vector<Scalar> coords = v.to_vector();
        for (std::size_t g = 0; g < coords.size(); ++g) {
            Scalar expected;
            if (k.second == 1)
                expected = (g == 0 && k.first == detail::zero_degree(I.body.rank())) ? Scalar(1) : Scalar();
            else if (r.tau.count(g))
                expected = r.tau.at(g).at(k.first, 0) - (g == 0 && k.first == detail::zero_degree(I.body.rank()) ? I.t0 : Scalar());
            if (!(coords[g] == expected)) throw NormalFormViolation("mirror map check failed at " + detail::index_string(I.target, k.first, k.second, g));
        }
    }
    return r;
}

struct InvariantTable {
    std::map<int, Rational> N;  // genus-0 degree-d invariants of the complete intersection
    std::map<int, Rational> n;  // multiple-cover corrected counts, N_d = sum_{k | d} n_{d/k} / k^3
};

/// Inverts N_d = sum_{k | d} n_{d/k} / k^3.
inline std::map<int, Rational> multiple_cover_counts(const std::map<int, Rational>& N) {
    std::map<int, Rational> n;
    for (auto& [d, Nd] : N) {
        Rational v = Nd;
        for (int k = 2; k <= d; ++k)
            if (d % k == 0) {
                auto it = n.find(d / k);
                if (it == n.end()) throw InvalidParams("multiple_cover_counts: missing degree " + std::to_string(d / k));
                v -= it->second / Rational(k * k * k);
            }
        v.canonicalize();
        n[d] = v;
    }
    return n;
}

/// Degree-d invariants of the Calabi-Yau threefold cut out by a section of F on P^n,
/// read off from sum_d d N_d q^d = (prod a_j) ([J]_{z^-1 p^2} - tau_1^2 / 2), q = Q exp(tau_1).
inline InvariantTable extract_invariants(const MirrorResult& m, const BundleModel& F) {
    const TargetModel& t = m.J.target;
    const int n = t.dim;
    if (t.components.size() != 1 || t.curve_rank != 1 || t.name != "P" + std::to_string(n))
        throw UnsupportedTarget("invariant extraction needs a projective space target, got " + t.name);
    long sum = 0, prod = 1;
    for (long a : F.lines) {
        if (a <= 0) throw UnsupportedTarget("bundle " + F.name + " has a non-positive summand");
        sum += a;
        prod *= a;
    }
    if (F.lines.empty() || sum != n + 1 || n - static_cast<long>(F.lines.size()) != 3)
        throw UnsupportedTarget("bundle " + F.name + " on " + t.name + " does not cut out a Calabi-Yau threefold");
    const int D = m.J.max_degree();
    auto rational_series_check = [](const ScalarSeries& s, const std::string& what) {
        for (auto& [k, v] : s.coefficients())
            if (!v.is_rational()) throw AssumptionViolated(what + " is not rational; apply the nonequivariant limit first");
    };
    const ScalarSeries tau0 = m.tau.at(0), tau1 = m.tau.at(t.index(0, 1));
    rational_series_check(tau1, "tau");
    if (!tau0.is_zero() || !m.J.t0.is_zero()) throw AssumptionViolated("mirror map has a nonzero unit component");

    ScalarSeries Y(1, D, 0, 0, true);
    for (int d = 0; d <= D; ++d) Y.set(d, 0, m.J.body.at(Multidegree{d}, -1).get(0, 2));
    rational_series_check(Y, "J");
    ScalarSeries rhs = (Y - (tau1 * tau1).scaled(Scalar(Rational(1, 2)))).scaled(Scalar(prod));

    // sum_d d N_d Q^d exp(d tau_1(Q)) = rhs(Q), solved degree by degree.
    const ScalarSeries e = series_exp(tau1);
    std::vector<ScalarSeries> epow{ScalarSeries::constant(Scalar(1), 1, D)};
    for (int d = 1; d <= D; ++d) epow.push_back(epow.back() * e);
    InvariantTable out;
    ScalarSeries lhs(1, D, 0, 0, true);
    for (int d = 1; d <= D; ++d) {
        const Scalar residual = rhs.at(d, 0) - lhs.at(d, 0);
        Rational Nd = residual.rational() / Rational(d);
        Nd.canonicalize();
        out.N[d] = Nd;
        ScalarSeries mono(1, D, 0, 0, true);
        mono.set(d, 0, Scalar(Rational(d) * Nd));
        lhs += mono * epow[static_cast<std::size_t>(d)];
    }
    out.n = multiple_cover_counts(out.N);
    return out;
}

/// Residual of the divisor shift on P^n: J(t0, t1 + eps) - exp(eps p / z) J(t0, t1)|_{Q -> Q e^eps},
/// which in the q-normal form is a comparison of bodies.
inline GiventalElement divisor_shift_residual(int n, const Scalar& t0, const Scalar& t1, const Scalar& eps, int max_degree) {
    JFunction shifted = j_closed_form_Pn(n, t0, t1 + eps, max_degree);
    JFunction base = j_closed_form_Pn(n, t0, t1, max_degree);
    return shifted.body - base.body * detail::exp_divisor_over_z(base.target, eps, 1, max_degree);
}

} // namespace orbiqrr
