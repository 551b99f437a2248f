#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "builtin.hpp"
#include "trunc_series.hpp"
#include "scalar_parse.hpp"

namespace orbiqrr {

/// Insertion phi_basis psi^psi of a correlator.
struct Insertion {
    int basis = 0;  // global basis index
    int psi = 0;
    friend auto operator<=>(const Insertion&, const Insertion&) = default;
};

enum class Provenance { builtin, ingested, derived };

inline std::string provenance_name(Provenance p) {
    switch (p) {
    case Provenance::builtin: return "builtin";
    case Provenance::ingested: return "ingested";
    default: return "derived";
    }
}

inline std::string correlator_string(const TargetModel& t, const Multidegree& d, const std::vector<Insertion>& ins) {
    std::string s = "<";
    for (std::size_t i = 0; i < ins.size(); ++i) {
        auto [c, a] = t.locate(static_cast<std::size_t>(ins[i].basis));
        s += (i ? ", " : "") + t.component(c).id + ":h^" + std::to_string(a);
        if (ins[i].psi) s += " psi^" + std::to_string(ins[i].psi);
    }
    return s + ">_{0," + std::to_string(ins.size()) + "," + degree_string(d) + "}";
}

/// Genus-zero correlators <a_1 psi^k_1, ..., a_n psi^k_n>_{0,n,d}, symmetric in the insertions.
class CorrelatorTable {
public:
    struct Entry {
        Scalar value;
        Provenance provenance = Provenance::builtin;
    };
    using Key = std::pair<Multidegree, std::vector<Insertion>>;

    explicit CorrelatorTable(TargetModel t) : t_(std::move(t)) {}

    const TargetModel& target() const { return t_; }
    const std::map<Key, Entry>& entries() const { return entries_; }

    /// True when the dimension constraint forces the correlator to vanish.
    bool dimension_violated(const Multidegree& d, const std::vector<Insertion>& ins) const {
        Rational need(t_.dim - 3 + static_cast<long>(ins.size()));
        for (std::size_t j = 0; j < d.size() && j < t_.c1_tangent.size(); ++j) need += Rational(t_.c1_tangent[j] * d[j]);
        Rational have(0);
        for (auto& x : ins) {
            auto [i, a] = t_.locate(static_cast<std::size_t>(x.basis));
            have += t_.orbifold_degree(i, a) / 2 + x.psi;
        }
        return have != need;
    }

    void set(const Multidegree& d, std::vector<Insertion> ins, const Scalar& v, Provenance p = Provenance::builtin) {
        if (static_cast<int>(d.size()) != t_.curve_rank) throw InvalidParams("correlator degree has wrong rank");
        for (auto& x : ins) {
            if (x.basis < 0 || x.basis >= static_cast<int>(t_.size()) || x.psi < 0) throw IndexOutOfRange("bad insertion in correlator");
        }
        std::sort(ins.begin(), ins.end());
        if (!v.is_zero() && dimension_violated(d, ins))
            throw DimensionMismatch("nonzero entry " + correlator_string(t_, d, ins) + " violates the dimension constraint");
        entries_[{d, std::move(ins)}] = Entry{v, p};
    }

    /// Value if determined: stored, forced to zero by dimension, or unstable of degree zero.
    std::optional<Scalar> lookup(const Multidegree& d, std::vector<Insertion> ins) const {
        std::sort(ins.begin(), ins.end());
        const bool deg0 = std::all_of(d.begin(), d.end(), [](int x) { return x == 0; });
        if (deg0 && ins.size() < 3) return Scalar();
        if (dimension_violated(d, ins)) return Scalar();
        auto it = entries_.find({d, ins});
        if (it == entries_.end()) return std::nullopt;
        return it->second.value;
    }

private:
    TargetModel t_;
    std::map<Key, Entry> entries_;
};

/// <psi^k_1, ..., psi^k_n>_{0,n} on a point = (n-3)! / prod k_i!.
inline Scalar point_correlators(int n, const std::vector<int>& k) {
    if (n < 3) throw DimensionMismatch("point correlators need n >= 3");
    if (static_cast<int>(k.size()) != n) throw InvalidParams("expected one psi power per insertion");
    long sum = 0;
    for (int x : k) {
        if (x < 0) throw InvalidParams("negative psi power");
        sum += x;
    }
    if (sum != n - 3) throw DimensionMismatch("psi powers sum to " + std::to_string(sum) + ", expected " + std::to_string(n - 3));
    Rational v = factorial(static_cast<unsigned>(n - 3));
    for (int x : k) v /= factorial(static_cast<unsigned>(x));
    return Scalar(v);
}

/// All nonvanishing point correlators with 3 <= n <= nmax.
inline CorrelatorTable point_table(int nmax) {
    CorrelatorTable table(build_point());
    for (int n = 3; n <= nmax; ++n) {
        // nonincreasing psi-power vectors summing to n - 3
        std::vector<int> k(static_cast<std::size_t>(n), 0);
        std::function<void(int, int, int)> rec = [&](int pos, int left, int cap) {
            if (pos == n) {
                if (left == 0) {
                    std::vector<Insertion> ins;
                    for (int x : k) ins.push_back({0, x});
                    table.set({}, ins, point_correlators(n, k));
                }
                return;
            }
            for (int v = std::min(left, cap); v >= 0; --v) {
                k[static_cast<std::size_t>(pos)] = v;
                rec(pos + 1, left - v, v);
            }
        };
        rec(0, n - 3, n - 3);
    }
    return table;
}

enum class UniversalKind { string, divisor, dilaton, trr };

inline UniversalKind parse_universal_kind(const std::string& s) {
    if (s == "string") return UniversalKind::string;
    if (s == "divisor") return UniversalKind::divisor;
    if (s == "dilaton") return UniversalKind::dilaton;
    if (s == "trr" || s == "TRR") return UniversalKind::trr;
    throw InvalidParams("unknown universal equation '" + s + "'");
}

struct UniversalFailure {
    std::string instance;
    int n = 0;
    Scalar residual;
};

struct UniversalReport {
    std::string kind;
    int checked = 0;
    bool vacuous = false;
    std::vector<UniversalFailure> failures;  // sorted by n
    bool ok() const { return failures.empty(); }
};

namespace detail {

class UniversalChecker {
public:
    explicit UniversalChecker(const CorrelatorTable& table) : table_(table), t_(table.target()) {}

    Scalar get(const Multidegree& d, const std::vector<Insertion>& ins) {
        auto v = table_.lookup(d, ins);
        if (!v) {
            missing_.push_back(correlator_string(t_, d, ins));
            return Scalar();
        }
        return *v;
    }
    void finish_instance() {
        if (missing_.empty()) return;
        std::string list;
        for (auto& m : missing_) list += (list.empty() ? "" : "; ") + m;
        throw InsufficientTable("missing entries: " + list);
    }

private:
    const CorrelatorTable& table_;
    const TargetModel& t_;
    std::vector<std::string> missing_;
};

inline std::vector<Insertion> without(const std::vector<Insertion>& v, std::size_t i) {
    std::vector<Insertion> r = v;
    r.erase(r.begin() + static_cast<long>(i));
    return r;
}

/// All splittings d = d1 + d2 with nonnegative parts.
inline std::vector<std::pair<Multidegree, Multidegree>> degree_splittings(const Multidegree& d) {
    std::vector<std::pair<Multidegree, Multidegree>> out{{Multidegree(), Multidegree()}};
    for (int x : d) {
        std::vector<std::pair<Multidegree, Multidegree>> next;
        for (auto& [a, b] : out)
            for (int y = 0; y <= x; ++y) {
                auto a2 = a, b2 = b;
                a2.push_back(y);
                b2.push_back(x - y);
                next.push_back({a2, b2});
            }
        out = std::move(next);
    }
    return out;
}

} // namespace detail

/// Checks one universal equation on every stored entry it applies to.
inline UniversalReport check_universal_equation(UniversalKind kind, const CorrelatorTable& table) {
    const TargetModel& t = table.target();
    UniversalReport rep;
    const int unit = 0;
    auto record = [&](const CorrelatorTable::Key& key, const Scalar& lhs, const Scalar& rhs) {
        ++rep.checked;
        Scalar r = lhs - rhs;
        if (!r.is_zero()) rep.failures.push_back({correlator_string(t, key.first, key.second), static_cast<int>(key.second.size()), r});
    };

    switch (kind) {
    case UniversalKind::string: {
        rep.kind = "string";
        for (auto& [key, e] : table.entries()) {
            const auto& [d, ins] = key;
            auto it = std::find(ins.begin(), ins.end(), Insertion{unit, 0});
            if (it == ins.end() || ins.size() < 4) continue;
            detail::UniversalChecker c(table);
            const auto rest = detail::without(ins, static_cast<std::size_t>(it - ins.begin()));
            Scalar rhs;
            for (std::size_t i = 0; i < rest.size(); ++i) {
                if (rest[i].psi == 0) continue;
                auto lowered = rest;
                --lowered[i].psi;
                rhs += c.get(d, lowered);
            }
            c.finish_instance();
            record(key, e.value, rhs);
        }
        break;
    }
    case UniversalKind::dilaton: {
        rep.kind = "dilaton";
        for (auto& [key, e] : table.entries()) {
            const auto& [d, ins] = key;
            auto it = std::find(ins.begin(), ins.end(), Insertion{unit, 1});
            if (it == ins.end() || ins.size() < 4) continue;
            detail::UniversalChecker c(table);
            const auto rest = detail::without(ins, static_cast<std::size_t>(it - ins.begin()));
            Scalar rhs = c.get(d, rest) * Scalar(static_cast<long>(rest.size()) - 2);
            c.finish_instance();
            record(key, e.value, rhs);
        }
        break;
    }
    case UniversalKind::divisor: {
        rep.kind = "divisor";
        if (t.dim == 0 || t.components.size() != 1 || t.curve_rank != 1) {
            if (t.dim == 0) {
                rep.vacuous = true;
                break;
            }
            throw UnsupportedTarget("divisor check needs a manifold target with one Novikov variable");
        }
        const int p = 1;
        for (auto& [key, e] : table.entries()) {
            const auto& [d, ins] = key;
            auto it = std::find(ins.begin(), ins.end(), Insertion{p, 0});
            if (it == ins.end()) continue;
            const auto rest = detail::without(ins, static_cast<std::size_t>(it - ins.begin()));
            if (rest.empty() || (rest.size() < 3 && d[0] == 0)) continue;
            detail::UniversalChecker c(table);
            Scalar rhs = c.get(d, rest) * Scalar(d[0]);
            for (std::size_t i = 0; i < rest.size(); ++i) {
                if (rest[i].psi == 0 || rest[i].basis + 1 > t.dim) continue;
                auto moved = rest;
                --moved[i].psi;
                ++moved[i].basis;
                rhs += c.get(d, moved);
            }
            c.finish_instance();
            record(key, e.value, rhs);
        }
        break;
    }
    case UniversalKind::trr: {
        rep.kind = "trr";
        const Matrix ginv = inverse(gram_matrix(t));
        const std::size_t N = t.size();
        for (auto& [key, e] : table.entries()) {
            const auto& [d, ins] = key;
            if (ins.size() < 4) continue;
            auto first = std::find_if(ins.begin(), ins.end(), [](const Insertion& x) { return x.psi > 0; });
            if (first == ins.end()) continue;
            const std::size_t i1 = static_cast<std::size_t>(first - ins.begin());
            std::vector<std::size_t> others;
            for (std::size_t i = 0; i < ins.size(); ++i)
                if (i != i1) others.push_back(i);
            Insertion a1 = ins[i1];
            --a1.psi;
            const Insertion a2 = ins[others[0]], a3 = ins[others[1]];
            std::vector<Insertion> S;
            for (std::size_t j = 2; j < others.size(); ++j) S.push_back(ins[others[j]]);
            detail::UniversalChecker c(table);
            Scalar rhs;
            for (unsigned mask = 0; mask < (1u << S.size()); ++mask) {
                std::vector<Insertion> left{a1}, right{a2, a3};
                for (std::size_t j = 0; j < S.size(); ++j) ((mask >> j) & 1u ? left : right).push_back(S[j]);
                for (auto& [d1, d2] : detail::degree_splittings(d))
                    for (std::size_t al = 0; al < N; ++al)
                        for (std::size_t be = 0; be < N; ++be) {
                            if (ginv[al][be].is_zero()) continue;
                            auto L = left, R = right;
                            L.push_back({static_cast<int>(al), 0});
                            R.push_back({static_cast<int>(be), 0});
                            const Scalar lv = c.get(d1, L);
                            if (lv.is_zero()) continue;
                            rhs += lv * ginv[al][be] * c.get(d2, R);
                        }
            }
            c.finish_instance();
            record(key, e.value, rhs);
        }
        break;
    }
    }
    std::stable_sort(rep.failures.begin(), rep.failures.end(), [](auto& a, auto& b) { return a.n < b.n; });
    return rep;
}

// ---------------------------------------------------------------------------

/// {"target": spec, "entries": [{"d", "insertions": [[basis, psi], ...], "value", "provenance"}]}
inline CorrelatorTable table_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw SchemaError("$: expected an object");
    const std::string spec = doc.contains("target") ? doc["target"].get<std::string>() : "point";
    CorrelatorTable table(target_from_spec(spec));
    if (!doc.contains("entries") || !doc["entries"].is_array()) throw SchemaError("$.entries: expected an array");
    const auto& entries = doc["entries"];
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const std::string p = "$.entries[" + std::to_string(k) + "]";
        const auto& e = entries[k];
        if (!e.is_object() || !e.contains("insertions") || !e.contains("value")) throw SchemaError(p + ": expected insertions and value");
        Multidegree d(static_cast<std::size_t>(table.target().curve_rank), 0);
        if (e.contains("d")) {
            if (e["d"].is_number_integer())
                d = Multidegree{e["d"].get<int>()};
            else if (e["d"].is_array())
                d = e["d"].get<Multidegree>();
            else
                throw SchemaError(p + ".d: expected an integer or an array");
        }
        std::vector<Insertion> ins;
        for (auto& x : e["insertions"]) {
            if (!x.is_array() || x.size() != 2 || !x[0].is_number_integer() || !x[1].is_number_integer())
                throw SchemaError(p + ".insertions: expected [basis, psi] pairs");
            ins.push_back({x[0].get<int>(), x[1].get<int>()});
        }
        Scalar v;
        try {
            v = e["value"].is_string() ? parse_scalar(e["value"].get<std::string>()) : Scalar(e["value"].get<long>());
        } catch (const ParseError& err) {
            throw SchemaError(p + ".value: " + err.what());
        }
        table.set(d, ins, v, Provenance::ingested);
    }
    return table;
}

inline nlohmann::json table_json(const CorrelatorTable& table, const std::string& spec) {
    nlohmann::json entries = nlohmann::json::array();
    for (auto& [key, e] : table.entries()) {
        nlohmann::json ins = nlohmann::json::array();
        for (auto& x : key.second) ins.push_back({x.basis, x.psi});
        entries.push_back({{"d", key.first}, {"insertions", ins}, {"value", e.value.to_string()}, {"provenance", provenance_name(e.provenance)}});
    }
    return {{"target", spec}, {"entries", entries}};
}

} // namespace orbiqrr
