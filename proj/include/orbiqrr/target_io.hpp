#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "builtin.hpp"

namespace orbiqrr {

using Json = nlohmann::json;

struct LoadedTarget {
    TargetModel target;
    std::vector<BundleModel> bundles;

    const BundleModel& bundle(const std::string& name) const {
        for (auto& b : bundles)
            if (b.name == name) return b;
        throw IndexOutOfRange("no bundle named '" + name + "' on target " + target.name);
    }
};

namespace detail {

class SchemaReader {
public:
    explicit SchemaReader(std::string path) : path_(std::move(path)) {}

    static const Json& field(const Json& obj, const std::string& key, const std::string& path) {
        if (!obj.is_object()) throw SchemaError(path + ": expected an object");
        auto it = obj.find(key);
        if (it == obj.end()) throw SchemaError(path + "." + key + ": missing field");
        return *it;
    }
    static long integer(const Json& j, const std::string& path) {
        if (!j.is_number_integer()) throw SchemaError(path + ": expected an integer");
        return j.get<long>();
    }
    static std::string string(const Json& j, const std::string& path) {
        if (!j.is_string()) throw SchemaError(path + ": expected a string");
        return j.get<std::string>();
    }
    static bool boolean(const Json& j, const std::string& path) {
        if (!j.is_boolean()) throw SchemaError(path + ": expected a boolean");
        return j.get<bool>();
    }
    static const Json& array(const Json& j, const std::string& path) {
        if (!j.is_array()) throw SchemaError(path + ": expected an array");
        return j;
    }
    static Rational rational(const Json& j, const std::string& path) {
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (!j.is_string()) throw SchemaError(path + ": expected a rational string");
        try {
            return parse_rational(j.get<std::string>());
        } catch (const ParseError& e) {
            throw SchemaError(path + ": " + e.what());
        }
    }

private:
    std::string path_;
};

inline Json rational_json(const Rational& r) { return r.get_str(); }

} // namespace detail

inline LoadedTarget parse_target(const Json& doc) {
    using R = detail::SchemaReader;
    LoadedTarget out;
    TargetModel& t = out.target;
    t.name = R::string(R::field(doc, "name", "$"), "$.name");
    t.dim = static_cast<int>(R::integer(R::field(doc, "dim", "$"), "$.dim"));
    t.curve_rank = static_cast<int>(R::integer(R::field(doc, "curve_rank", "$"), "$.curve_rank"));
    if (doc.contains("c1_tangent")) {
        const Json& a = R::array(doc["c1_tangent"], "$.c1_tangent");
        for (std::size_t k = 0; k < a.size(); ++k) t.c1_tangent.push_back(R::integer(a[k], "$.c1_tangent[" + std::to_string(k) + "]"));
    }
    if (doc.contains("genus1_constants")) {
        const Json& a = R::array(doc["genus1_constants"], "$.genus1_constants");
        for (std::size_t k = 0; k < a.size(); ++k) t.genus1_constants.push_back(R::string(a[k], "$.genus1_constants[" + std::to_string(k) + "]"));
    }
    if (doc.contains("jfunction_file")) t.jfunction_file = R::string(doc["jfunction_file"], "$.jfunction_file");

    const Json& comps = R::array(R::field(doc, "components", "$"), "$.components");
    std::vector<std::string> partner_ids;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string p = "$.components[" + std::to_string(i) + "]";
        const Json& c = comps[i];
        Component comp;
        comp.id = R::string(R::field(c, "id", p), p + ".id");
        comp.r = static_cast<int>(R::integer(R::field(c, "r", p), p + ".r"));
        comp.age = R::rational(R::field(c, "age", p), p + ".age");
        partner_ids.push_back(R::string(R::field(c, "involution", p), p + ".involution"));
        const Json& basis = R::array(R::field(c, "basis", p), p + ".basis");
        for (std::size_t a = 0; a < basis.size(); ++a) {
            const std::string bp = p + ".basis[" + std::to_string(a) + "]";
            BasisElement b{R::string(R::field(basis[a], "name", bp), bp + ".name"),
                           static_cast<int>(R::integer(R::field(basis[a], "degree", bp), bp + ".degree"))};
            if (b.degree % 2 != 0) throw SchemaError(bp + ".degree: odd-degree classes are not supported");
            comp.basis.push_back(b);
        }
        const Json& pairing = R::array(R::field(c, "pairing", p), p + ".pairing");
        for (std::size_t a = 0; a < pairing.size(); ++a) {
            const std::string rp = p + ".pairing[" + std::to_string(a) + "]";
            const Json& row = R::array(pairing[a], rp);
            std::vector<Rational> vals;
            for (std::size_t b = 0; b < row.size(); ++b) vals.push_back(R::rational(row[b], rp + "[" + std::to_string(b) + "]"));
            comp.pairing.push_back(vals);
        }
        t.components.push_back(comp);
    }
    for (std::size_t i = 0; i < partner_ids.size(); ++i) {
        try {
            t.components[i].partner = t.find_component(partner_ids[i]);
        } catch (const IndexOutOfRange&) {
            throw SchemaError("$.components[" + std::to_string(i) + "].involution: unknown component '" + partner_ids[i] + "'");
        }
    }
    validate_target(t);

    if (doc.contains("bundles")) {
        const Json& bundles = R::array(doc["bundles"], "$.bundles");
        for (std::size_t k = 0; k < bundles.size(); ++k) {
            const std::string p = "$.bundles[" + std::to_string(k) + "]";
            const Json& b = bundles[k];
            BundleModel F;
            F.name = R::string(R::field(b, "name", p), p + ".name");
            F.pulled_back = R::boolean(R::field(b, "pulled_back", p), p + ".pulled_back");
            F.rank = static_cast<int>(R::integer(R::field(b, "rank", p), p + ".rank"));
            const Json& c1 = R::array(R::field(b, "c1_pairing", p), p + ".c1_pairing");
            for (std::size_t j = 0; j < c1.size(); ++j) F.c1_pairing.push_back(R::integer(c1[j], p + ".c1_pairing[" + std::to_string(j) + "]"));
            if (b.contains("lines")) {
                const Json& lines = R::array(b["lines"], p + ".lines");
                for (std::size_t j = 0; j < lines.size(); ++j) F.lines.push_back(R::integer(lines[j], p + ".lines[" + std::to_string(j) + "]"));
            }
            const Json& eigen = R::array(R::field(b, "eigen", p), p + ".eigen");
            for (std::size_t j = 0; j < eigen.size(); ++j) {
                const std::string ep = p + ".eigen[" + std::to_string(j) + "]";
                EigenPiece e;
                const std::string cid = R::string(R::field(eigen[j], "component", ep), ep + ".component");
                try {
                    e.component = t.find_component(cid);
                } catch (const IndexOutOfRange&) {
                    throw SchemaError(ep + ".component: unknown component '" + cid + "'");
                }
                e.l = static_cast<int>(R::integer(R::field(eigen[j], "l", ep), ep + ".l"));
                e.rank = static_cast<int>(R::integer(R::field(eigen[j], "rank", ep), ep + ".rank"));
                const Json& ch = R::array(R::field(eigen[j], "ch", ep), ep + ".ch");
                for (std::size_t q = 0; q < ch.size(); ++q) e.ch.push_back(R::rational(ch[q], ep + ".ch[" + std::to_string(q) + "]"));
                F.eigen.push_back(e);
            }
            validate_bundle(t, F);
            out.bundles.push_back(F);
        }
    }
    return out;
}

inline LoadedTarget load_target(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError(std::string("$: invalid JSON: ") + e.what());
    }
    return parse_target(doc);
}

inline Json target_json(const TargetModel& t, const std::vector<BundleModel>& bundles = {}) {
    Json doc;
    doc["name"] = t.name;
    doc["dim"] = t.dim;
    doc["curve_rank"] = t.curve_rank;
    if (!t.c1_tangent.empty()) doc["c1_tangent"] = t.c1_tangent;
    if (!t.genus1_constants.empty()) doc["genus1_constants"] = t.genus1_constants;
    if (t.jfunction_file) doc["jfunction_file"] = *t.jfunction_file;
    Json comps = Json::array();
    for (auto& c : t.components) {
        Json jc;
        jc["id"] = c.id;
        jc["r"] = c.r;
        jc["age"] = detail::rational_json(c.age);
        jc["involution"] = t.component(c.partner).id;
        Json basis = Json::array();
        for (auto& b : c.basis) basis.push_back({{"name", b.name}, {"degree", b.degree}});
        jc["basis"] = basis;
        Json pairing = Json::array();
        for (auto& row : c.pairing) {
            Json jr = Json::array();
            for (auto& x : row) jr.push_back(detail::rational_json(x));
            pairing.push_back(jr);
        }
        jc["pairing"] = pairing;
        comps.push_back(jc);
    }
    doc["components"] = comps;
    Json jb = Json::array();
    for (auto& F : bundles) {
        Json b;
        b["name"] = F.name;
        b["pulled_back"] = F.pulled_back;
        b["rank"] = F.rank;
        b["c1_pairing"] = F.c1_pairing;
        if (!F.lines.empty()) b["lines"] = F.lines;
        Json eigen = Json::array();
        for (auto& e : F.eigen) {
            Json ch = Json::array();
            for (auto& x : e.ch) ch.push_back(detail::rational_json(x));
            eigen.push_back({{"component", t.component(e.component).id}, {"l", e.l}, {"rank", e.rank}, {"ch", ch}});
        }
        b["eigen"] = eigen;
        jb.push_back(b);
    }
    doc["bundles"] = jb;
    return doc;
}

inline std::string serialize_target(const TargetModel& t, const std::vector<BundleModel>& bundles = {}) {
    return target_json(t, bundles).dump(2);
}

} // namespace orbiqrr
