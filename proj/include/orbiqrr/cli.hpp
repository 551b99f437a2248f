#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "cache.hpp"
#include "fock.hpp"
#include "report.hpp"
#include "target_io.hpp"

namespace orbiqrr::cli {

enum class Format { json, pretty, csv };

/// A command's result: the JSON document, an optional pretty rendering, and the exit code.
struct Result {
    Json doc;
    std::string pretty;
    int code = 0;
};

namespace detail {

inline bool is_primitive(const Json& j) { return !j.is_object() && !j.is_array(); }

inline std::string cell(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_null()) return "";
    return j.dump();
}

inline bool is_table(const Json& j) {
    return j.is_array() && !j.empty() && std::all_of(j.begin(), j.end(), [](const Json& r) {
               return r.is_object() && std::all_of(r.begin(), r.end(), [](const Json& v) { return is_primitive(v); });
           });
}

inline std::vector<std::string> columns(const Json& rows) {
    std::set<std::string> keys;
    for (auto& r : rows)
        for (auto it = r.begin(); it != r.end(); ++it) keys.insert(it.key());
    return {keys.begin(), keys.end()};
}

inline void write_table(std::ostream& os, const Json& rows, int indent) {
    const auto cols = columns(rows);
    std::vector<std::size_t> width;
    for (auto& c : cols) {
        std::size_t w = c.size();
        for (auto& r : rows) w = std::max(w, r.contains(c) ? cell(r[c]).size() : 0);
        width.push_back(w);
    }
    auto line = [&](auto&& get) {
        std::string s(static_cast<std::size_t>(indent), ' ');
        for (std::size_t k = 0; k < cols.size(); ++k) {
            std::string v = get(k);
            s += v + (k + 1 < cols.size() ? std::string(width[k] - v.size() + 2, ' ') : "");
        }
        os << s << "\n";
    };
    line([&](std::size_t k) { return cols[k]; });
    for (auto& r : rows) line([&](std::size_t k) { return r.contains(cols[k]) ? cell(r[cols[k]]) : std::string(); });
}

inline void write_pretty(std::ostream& os, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (is_primitive(j)) {
        os << pad << cell(j) << "\n";
        return;
    }
    if (is_table(j)) {
        write_table(os, j, indent);
        return;
    }
    if (j.is_array()) {
        if (std::all_of(j.begin(), j.end(), is_primitive)) {
            std::string s;
            for (auto& v : j) s += (s.empty() ? "" : ", ") + cell(v);
            os << pad << s << "\n";
            return;
        }
        for (auto& v : j) {
            os << pad << "-\n";
            write_pretty(os, v, indent + 2);
        }
        return;
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (is_primitive(it.value())) {
            os << pad << it.key() << ": " << cell(it.value()) << "\n";
        } else if (it.value().empty()) {
            os << pad << it.key() << ": " << (it.value().is_array() ? "[]" : "{}") << "\n";
        } else {
            os << pad << it.key() << ":\n";
            write_pretty(os, it.value(), indent + 2);
        }
    }
}

inline std::string csv_cell(const Json& j) {
    std::string s = cell(j);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

inline void write_csv(std::ostream& os, const Json& doc) {
    const Json* rows = doc.is_array() ? &doc : (doc.is_object() && doc.contains("rows") ? &doc["rows"] : nullptr);
    if (rows && rows->is_array()) {
        const auto cols = columns(*rows);
        for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
        os << "\n";
        for (auto& r : *rows) {
            for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << (r.contains(cols[k]) ? csv_cell(r[cols[k]]) : "");
            os << "\n";
        }
        return;
    }
    os << "key,value\n";
    if (doc.is_object())
        for (auto it = doc.begin(); it != doc.end(); ++it) os << it.key() << "," << csv_cell(it.value().is_primitive() ? it.value() : Json(it.value().dump())) << "\n";
    else
        os << "value," << csv_cell(doc) << "\n";
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IOError", "cli", "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Json parse_json_file(const std::string& path) {
    Json doc = Json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded()) throw SchemaError(path + ": invalid JSON");
    return doc;
}

/// Built-in target from a short spec, or a target file when the argument names an existing file.
struct TargetInput {
    TargetModel target;
    std::vector<BundleModel> bundles;
};

inline TargetInput resolve_target(const std::string& arg) {
    if (std::filesystem::is_regular_file(arg)) {
        LoadedTarget l = load_target(read_file(arg));
        return {l.target, l.bundles};
    }
    return {target_from_spec(arg), {}};
}

inline BundleModel resolve_bundle(const TargetInput& in, const std::string& arg) {
    for (auto& F : in.bundles)
        if (F.name == arg) return F;
    BundleModel F = bundle_from_spec(in.target, arg);
    validate_bundle(in.target, F);
    return F;
}

inline SValues parse_s_list(const std::vector<std::string>& items) {
    SValues s;
    for (auto& x : items) s.values.push_back(parse_scalar(x));
    return s;
}

inline Json s_json(const SValues& s) {
    Json a = Json::array();
    for (auto& v : s.values) a.push_back(scalar_json(v));
    return {{"values", a}, {"euler", s.euler}};
}

inline Rational random_rational(std::mt19937& rng, int bound = 5) {
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

/// "id", "zero", a JSON matrix literal, or "@file" holding one.
inline Matrix parse_matrix(const std::string& spec, std::size_t n) {
    if (spec == "id") return identity_matrix(n);
    if (spec == "zero") return zero_matrix(n);
    const std::string text = !spec.empty() && spec[0] == '@' ? read_file(spec.substr(1)) : spec;
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_array() || j.size() != n) throw InvalidParams("matrix spec must be id, zero or an " + std::to_string(n) + "x" + std::to_string(n) + " JSON array");
    Matrix m = zero_matrix(n);
    for (std::size_t a = 0; a < n; ++a) {
        if (!j[a].is_array() || j[a].size() != n) throw InvalidParams("matrix row " + std::to_string(a) + " must have " + std::to_string(n) + " entries");
        for (std::size_t b = 0; b < n; ++b) m[a][b] = j[a][b].is_string() ? parse_scalar(j[a][b].get<std::string>()) : Scalar(j[a][b].get<long>());
    }
    return m;
}

/// Runs `compute` through the cache in $ORBIQRR_CACHE, reporting the cache outcome on `err`.
template <class Compute>
Json cached(const Json& key, Compute&& compute, std::ostream& err) {
    auto cache = ResultCache::from_env();
    if (!cache) return compute();
    auto f = cache->fetch(key, compute);
    if (f.status == CacheStatus::recovered) err << f.note << "; recomputed\n";
    err << "cache " << cache_status_name(f.status) << " " << cache->key_hash(key) << "\n";
    return f.payload;
}

inline TargetModel require_projective(const TargetModel& t) {
    if (t.components.size() != 1 || t.curve_rank != 1 || t.name != "P" + std::to_string(t.dim))
        throw UnsupportedTarget("closed-form J-function needs a projective space target, got " + t.name);
    return t;
}

inline JFunction i_function(const TargetModel& t, const BundleModel& F, int D) {
    require_projective(t);
    return hypergeometric_modification(j_closed_form_Pn(t.dim, Scalar(), Scalar(), D), F);
}

inline Json check_outcome(Json doc, bool ok, const std::string& module) {
    doc["ok"] = ok;
    if (!ok) {
        doc["error"] = "CheckFailed";
        doc["module"] = module;
    }
    return doc;
}

} // namespace detail

/// Parses `args` (without the program name), runs the command and writes the report to `out`.
/// Exit codes: 0 success, 1 domain error or failed check, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"Exact genus-zero twisted orbifold Gromov-Witten computations", "orbiqrr"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "pretty";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "pretty", "csv"}));

    std::function<Result()> action;

    // target
    auto* target = app.add_subcommand("target", "Validate or print a target description");
    target->require_subcommand(1);
    std::string target_file, target_spec;
    auto* validate = target->add_subcommand("validate", "Validate a target JSON file");
    validate->add_option("file", target_file, "Target JSON file")->required();
    validate->callback([&] {
        action = [&] {
            LoadedTarget l = load_target(read_file(target_file));
            Json names = Json::array();
            for (auto& F : l.bundles) names.push_back(F.name);
            return Result{{{"valid", true}, {"name", l.target.name}, {"components", l.target.components.size()}, {"bundles", names}}, {}, 0};
        };
    });
    auto* show = target->add_subcommand("show", "Print a built-in target as JSON");
    show->add_option("spec", target_spec, "Target spec such as P4, Bmu3, WPS(1,1,2)")->required();
    show->callback([&] { action = [&] { return Result{target_json(target_from_spec(target_spec)), {}, 0}; }; });

    // bernoulli
    auto* bern = app.add_subcommand("bernoulli", "Exact Bernoulli number or polynomial value");
    int bern_m = 0;
    std::string bern_x;
    bern->add_option("--m", bern_m, "Index m")->required()->check(CLI::NonNegativeNumber);
    bern->add_option("--x", bern_x, "Rational argument p/q; omit for the Bernoulli number");
    bern->callback([&] {
        action = [&] {
            const unsigned m = static_cast<unsigned>(bern_m);
            Json doc{{"m", bern_m}};
            Rational v;
            if (bern_x.empty()) {
                v = bernoulli_number(m);
            } else {
                const Scalar x = parse_scalar(bern_x);
                if (!x.is_rational()) throw InvalidParams("--x must be rational");
                doc["x"] = x.rational().get_str();
                v = bernoulli_value(m, x.rational());
            }
            v.canonicalize();
            doc["value"] = v.get_str();
            return Result{doc, v.get_str(), 0};
        };
    });

    // delta
    auto* delta = app.add_subcommand("delta", "Loop operator Delta of a twisting");
    std::string d_target, d_bundle;
    std::vector<std::string> d_s;
    bool d_euler = false, d_no_log = false, d_check = false;
    int d_zmax = 0;
    delta->add_option("--target", d_target, "Target spec or JSON file")->required();
    delta->add_option("--bundle", d_bundle, "Bundle spec or bundle name in the target file")->required();
    auto* euler_flag = delta->add_flag("--euler", d_euler, "Euler specialization of s");
    auto* s_opt = delta->add_option("--s", d_s, "s_0,s_1,... as exact scalars")->delimiter(',');
    euler_flag->excludes(s_opt);
    delta->add_flag("--no-log", d_no_log, "With --euler, take s_0 = 0 instead of ell");
    delta->add_option("--zmax", d_zmax, "Highest z power kept")->required()->check(CLI::NonNegativeNumber);
    delta->add_flag("--check-symplectic", d_check, "Check Delta*(-z) Delta(z) = 1 through z^zmax");
    delta->callback([&] {
        action = [&] {
            if (!d_euler && d_s.empty()) throw CLI::ValidationError("--euler or --s is required");
            TargetInput in = resolve_target(d_target);
            BundleModel F = resolve_bundle(in, d_bundle);
            const SValues s = d_euler ? euler_s_values(1, !d_no_log) : parse_s_list(d_s);
            const Json key{{"command", "delta"}, {"target", target_json(in.target, {F})}, {"s", s_json(s)}, {"zmax", d_zmax}, {"check_symplectic", d_check}};
            Json doc = cached(key, [&] {
                const LoopOperator D = delta_operator(in.target, F, s, d_zmax);
                Json j = loop_operator_json(in.target, D);
                if (d_check) {
                    const LoopOperator wide = D.zmin() < 0 ? delta_operator(in.target, F, s, d_zmax - D.zmin()) : D;
                    j["symplectic"] = symplectic_report_json(check_symplectomorphism(in.target, wide, d_zmax));
                }
                return j;
            }, err);
            const bool ok = !d_check || doc["symplectic"]["holds"].get<bool>();
            return Result{d_check ? check_outcome(doc, ok, "loopops") : doc, {}, ok ? 0 : 1};
        };
    });

    // ifunction / mirror-map / invariants
    std::string g_target, g_bundle;
    int g_degree = 0;
    bool g_noneq = false;
    auto genus0_options = [&](CLI::App* c) {
        c->add_option("--target", g_target, "Projective space, e.g. P4")->required();
        c->add_option("--bundle", g_bundle, "Split bundle, e.g. O5 or O(3)+O(3)")->required();
        c->add_option("--max-degree", g_degree, "Novikov degree cutoff")->required()->check(CLI::NonNegativeNumber);
    };
    auto* ifn = app.add_subcommand("ifunction", "Hypergeometric modification I_F of the closed-form J-function");
    genus0_options(ifn);
    ifn->add_flag("--nonequivariant", g_noneq, "Apply lambda -> 0");
    ifn->callback([&] {
        action = [&] {
            TargetInput in = resolve_target(g_target);
            BundleModel F = resolve_bundle(in, g_bundle);
            const Json key{{"command", "ifunction"}, {"target", target_json(in.target, {F})}, {"max_degree", g_degree}, {"nonequivariant", g_noneq}};
            return Result{cached(key, [&] {
                JFunction I = i_function(in.target, F, g_degree);
                return j_function_rows(g_noneq ? nonequivariant_limit(I) : I);
            }, err), {}, 0};
        };
    });
    bool g_equiv = false;
    auto* mm = app.add_subcommand("mirror-map", "Mirror map tau = G / F and the normalized J-function");
    genus0_options(mm);
    mm->add_flag("--equivariant", g_equiv, "Keep lambda instead of taking the nonequivariant limit");
    mm->callback([&] {
        action = [&] {
            TargetInput in = resolve_target(g_target);
            BundleModel F = resolve_bundle(in, g_bundle);
            const Json key{{"command", "mirror-map"}, {"target", target_json(in.target, {F})}, {"max_degree", g_degree}, {"equivariant", g_equiv}};
            return Result{cached(key, [&] {
                JFunction I = i_function(in.target, F, g_degree);
                MirrorResult m = mirror_map(g_equiv ? I : nonequivariant_limit(I));
                Json j = mirror_json(m);
                Json rows = Json::array();
                for (auto it = j["tau"].begin(); it != j["tau"].end(); ++it)
                    for (auto& r : it.value()) {
                        Json row = r;
                        row["class"] = it.key();
                        rows.push_back(row);
                    }
                j["rows"] = rows;
                return j;
            }, err), {}, 0};
        };
    });
    auto* inv = app.add_subcommand("invariants", "Genus-zero invariants of the Calabi-Yau complete intersection");
    genus0_options(inv);
    inv->callback([&] {
        action = [&] {
            TargetInput in = resolve_target(g_target);
            BundleModel F = resolve_bundle(in, g_bundle);
            const Json key{{"command", "invariants"}, {"target", target_json(in.target, {F})}, {"max_degree", g_degree}};
            return Result{cached(key, [&] {
                InvariantTable tab = extract_invariants(mirror_map(nonequivariant_limit(i_function(in.target, F, g_degree))), F);
                return Json{{"target", in.target.name}, {"bundle", F.name}, {"max_degree", g_degree}, {"rows", invariants_json(tab)}};
            }, err), {}, 0};
        };
    });

    // quantize
    auto* quant = app.add_subcommand("quantize", "Quantize an infinitesimally symplectic B z^m");
    std::string q_target, q_B, q_route = "formula";
    int q_m = 0, q_K = 0;
    quant->add_option("--target", q_target, "Target spec or JSON file")->required();
    quant->add_option("--B", q_B, "id, zero, a JSON matrix, or @file")->required();
    quant->add_option("--m", q_m, "Power of z")->required();
    quant->add_option("--K", q_K, "Highest level k of the Fock variables")->required()->check(CLI::NonNegativeNumber);
    quant->add_option("--route", q_route, "formula or hamiltonian")->check(CLI::IsMember({"formula", "hamiltonian"}));
    quant->callback([&] {
        action = [&] {
            TargetInput in = resolve_target(q_target);
            const Matrix G = gram_matrix(in.target);
            const Matrix B = parse_matrix(q_B, G.size());
            const FockOperator op = q_route == "formula" ? quantize_monomial(G, B, q_m, q_K) : quantize_via_hamiltonian(G, B, q_m, q_K);
            Json doc = operator_json(op);
            doc["rows"] = Json::array();
            const auto names = [&](const Json& vars, const std::string& prefix) {
                std::string s;
                for (auto& v : vars) {
                    s += (s.empty() ? "" : " ") + prefix + std::to_string(v["k"].get<int>());
                    if (G.size() > 1) s += "^" + std::to_string(v["basis"].get<int>());
                }
                return s;
            };
            for (auto& t : doc["terms"]) {
                Json row = t;
                row["q"] = names(t["q"], "q");
                row["d"] = names(t["d"], "d/dq");
                doc["rows"].push_back(row);
            }
            doc.erase("terms");
            return Result{doc, {}, 0};
        };
    });

    // check
    auto* check = app.add_subcommand("check", "Identity suites");
    check->require_subcommand(1);

    auto* universal = check->add_subcommand("universal", "String, dilaton, divisor or TRR on a correlator table");
    std::string u_kind, u_table;
    int u_point = 0;
    universal->add_option("--kind", u_kind, "string, dilaton, divisor or trr")->required();
    auto* table_opt = universal->add_option("--table", u_table, "Correlator table JSON file");
    auto* point_opt = universal->add_option("--point-nmax", u_point, "Use the built-in point table with n <= N");
    table_opt->excludes(point_opt);
    universal->callback([&] {
        action = [&] {
            if (u_table.empty() && u_point == 0) throw CLI::ValidationError("--table or --point-nmax is required");
            const CorrelatorTable table = u_table.empty() ? point_table(u_point) : table_from_json(parse_json_file(u_table));
            const UniversalReport rep = check_universal_equation(parse_universal_kind(u_kind), table);
            Json doc = universal_report_json(rep);
            doc["rows"] = doc["failures"];
            return Result{check_outcome(doc, rep.ok(), "genus0"), {}, rep.ok() ? 0 : 1};
        };
    });

    auto* cocycle = check->add_subcommand("cocycle", "Commutator cocycle against the closed form");
    std::string c_target = "point", c_B1, c_B2;
    int c_m1 = 0, c_m2 = 0, c_K = 0, c_trials = 20, c_mmax = 3;
    unsigned c_seed = 1;
    cocycle->add_option("--target", c_target, "Target spec or JSON file");
    cocycle->add_option("--K", c_K, "Highest level k of the Fock variables")->required();
    auto* b1 = cocycle->add_option("--B1", c_B1, "First endomorphism (explicit mode)");
    cocycle->add_option("--m1", c_m1, "First power of z")->needs(b1);
    auto* b2 = cocycle->add_option("--B2", c_B2, "Second endomorphism (explicit mode)")->needs(b1);
    b1->needs(b2);
    cocycle->add_option("--m2", c_m2, "Second power of z")->needs(b2);
    cocycle->add_option("--trials", c_trials, "Random pairs when --B1/--B2 are absent")->check(CLI::PositiveNumber);
    cocycle->add_option("--mmax", c_mmax, "Largest |m| for random pairs")->check(CLI::NonNegativeNumber);
    cocycle->add_option("--seed", c_seed, "Random seed");
    cocycle->callback([&] {
        action = [&] {
            TargetInput in = resolve_target(c_target);
            const Matrix G = gram_matrix(in.target);
            std::vector<std::pair<SymplecticMonomial, SymplecticMonomial>> pairs;
            if (!c_B1.empty()) {
                pairs.push_back({{parse_matrix(c_B1, G.size()), c_m1}, {parse_matrix(c_B2, G.size()), c_m2}});
            } else {
                std::mt19937 rng(c_seed);
                std::uniform_int_distribution<int> pick(-c_mmax, c_mmax);
                for (int k = 0; k < c_trials; ++k) {
                    const int m1 = pick(rng), m2 = pick(rng);
                    pairs.push_back({{symplectic_projection(G, random_matrix(G.size(), rng), m1), m1},
                                     {symplectic_projection(G, random_matrix(G.size(), rng), m2), m2}});
                }
            }
            Json rows = Json::array();
            bool ok = true;
            for (std::size_t k = 0; k < pairs.size(); ++k) {
                auto& [A, A2] = pairs[k];
                const Scalar direct = commutator_cocycle(G, A, A2, c_K);
                const Scalar closed = cocycle_closed_form(G, A, A2);
                ok = ok && direct == closed;
                rows.push_back({{"pair", k}, {"m1", A.second}, {"m2", A2.second}, {"commutator", scalar_json(direct)}, {"closed_form", scalar_json(closed)}, {"match", direct == closed}});
            }
            return Result{check_outcome({{"target", in.target.name}, {"K", c_K}, {"rows", rows}}, ok, "fockquant"), {}, ok ? 0 : 1};
        };
    });

    auto* string_check = check->add_subcommand("string", "String equation for the point genus-0 potential");
    int st_nmax = 0;
    string_check->add_option("--nmax", st_nmax, "Largest number of marked points in the potential")->required()->check(CLI::Range(3, 12));
    string_check->callback([&] {
        action = [&] {
            const StringResidual r = string_residual(point_genus0_potential(st_nmax, std::max(1, st_nmax - 3)));
            Json doc{{"nmax", st_nmax}, {"exact_through", r.exact_through}, {"residual", r.residual.to_string()}};
            return Result{check_outcome(doc, r.vanishes, "fockquant"), {}, r.vanishes ? 0 : 1};
        };
    });

    auto* serre = check->add_subcommand("serre", "Serre duality cone check for (c, F) against (c^v, F^v)");
    std::string se_target, se_bundle;
    std::vector<std::string> se_s;
    int se_smax = 0, se_zmax = 0;
    unsigned se_seed = 1;
    bool se_log = false;
    serre->add_option("--target", se_target, "Target spec or JSON file")->required();
    serre->add_option("--bundle", se_bundle, "Bundle spec or bundle name")->required();
    auto* smax_opt = serre->add_option("--smax", se_smax, "Random s_1..s_K with this K")->check(CLI::NonNegativeNumber);
    auto* ss_opt = serre->add_option("--s", se_s, "Explicit s_0,s_1,...")->delimiter(',');
    smax_opt->excludes(ss_opt);
    serre->add_option("--zmax", se_zmax, "Highest z power checked")->required()->check(CLI::NonNegativeNumber);
    serre->add_option("--seed", se_seed, "Random seed for s");
    serre->add_flag("--log", se_log, "Random s with s_0 = ell instead of 0");
    serre->callback([&] {
        action = [&] {
            if (se_s.empty() && smax_opt->count() == 0) throw CLI::ValidationError("--smax or --s is required");
            TargetInput in = resolve_target(se_target);
            BundleModel F = resolve_bundle(in, se_bundle);
            SValues s;
            if (!se_s.empty()) {
                s = parse_s_list(se_s);
            } else {
                std::mt19937 rng(se_seed);
                s.values.push_back(se_log ? Scalar::ell() : Scalar());
                for (int k = 1; k <= se_smax; ++k) s.values.push_back(Scalar(random_rational(rng)));
            }
            const SerreConeReport rep = check_serre_cone(in.target, F, s, se_zmax);
            Json doc = serre_report_json(rep);
            doc["s"] = s_json(s)["values"];
            return Result{check_outcome(doc, rep.holds, "serre"), {}, rep.holds ? 0 : 1};
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const Format fmt = format == "json" ? Format::json : format == "csv" ? Format::csv : Format::pretty;
    auto emit = [&](const Json& doc, const std::string& pretty) {
        if (fmt == Format::json)
            out << doc.dump(2) << "\n";
        else if (fmt == Format::csv)
            write_csv(out, doc);
        else if (!pretty.empty())
            out << pretty << "\n";
        else
            write_pretty(out, doc, 0);
    };
    try {
        Result r = action();
        emit(r.doc, r.pretty);
        return r.code;
    } catch (const CLI::ValidationError& e) {
        err << app.get_name() << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        out << error_json(e).dump(2) << "\n";
        return 1;
    } catch (const Json::exception& e) {
        out << error_json(SchemaError(e.what())).dump(2) << "\n";
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        out << error_json(Error("IOError", "cli", e.what())).dump(2) << "\n";
        return 1;
    }
}

} // namespace orbiqrr::cli
