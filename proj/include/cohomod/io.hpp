#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "cohomod/complete.hpp"
#include "cohomod/dickson.hpp"
#include "cohomod/group.hpp"
#include "cohomod/regseq.hpp"

namespace cohomod::io {

using json = nlohmann::ordered_json;

/// Malformed input (wrong JSON shape); distinct from semantic errors so the
/// command line can map them to different exit codes.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

inline std::string fnv1a_digest(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

inline std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return fnv1a_digest(os.str());
}

// ---- groups ----------------------------------------------------------

/// {"p": int, "generators": [[int,...],...]} with 1-based image arrays, or
/// {"p": int, "table": [[int,...],...]} with 0-based entries, identity 0.
inline PGroup load_group(const json& j, std::size_t order_cap = 128) {
    if (!j.is_object() || !j.contains("p") || !j["p"].is_number_integer() ||
        j["p"].get<long long>() < 2)
        throw ParseError("group: expected an object with a prime field \"p\"");
    std::uint32_t p = j["p"].get<std::uint32_t>();
    if (j.contains("generators")) {
        if (!j["generators"].is_array() || j["generators"].empty())
            throw ParseError("group: \"generators\" must be a nonempty array");
        std::vector<std::vector<std::size_t>> gens;
        for (const auto& gj : j["generators"]) {
            if (!gj.is_array()) throw ParseError("group: generator must be an array");
            gens.push_back(gj.get<std::vector<std::size_t>>());
        }
        return build_group(p, gens, order_cap);
    }
    if (j.contains("table")) {
        if (!j["table"].is_array())
            throw ParseError("group: \"table\" must be an array of rows");
        std::vector<std::vector<std::size_t>> table;
        for (const auto& row : j["table"])
            table.push_back(row.get<std::vector<std::size_t>>());
        if (table.size() > order_cap)
            throw std::invalid_argument("group: order cap exceeded");
        return group_from_table(p, std::move(table));
    }
    throw ParseError("group: need \"generators\" or \"table\"");
}

// ---- polynomials and rings -------------------------------------------

/// POLY = [{"c": int, "m": [[genIndex, exponent], ...]}], genIndex ascending.
inline SparsePoly load_poly(const json& j) {
    if (!j.is_array()) throw ParseError("poly: expected an array of terms");
    SparsePoly sp;
    for (const auto& tj : j) {
        if (!tj.is_object() || !tj.contains("c") || !tj.contains("m"))
            throw ParseError("poly: term needs \"c\" and \"m\"");
        SparsePoly::STerm t;
        t.c = tj["c"].get<std::uint32_t>();
        long last = -1;
        for (const auto& pj : tj["m"]) {
            if (!pj.is_array() || pj.size() != 2)
                throw ParseError("poly: monomial entries are [genIndex, exponent]");
            std::size_t idx = pj[0].get<std::size_t>();
            std::uint16_t e = pj[1].get<std::uint16_t>();
            if (static_cast<long>(idx) <= last)
                throw ParseError("poly: generator indices must be ascending");
            last = static_cast<long>(idx);
            t.exps.push_back({idx, e});
        }
        sp.terms.push_back(std::move(t));
    }
    return sp;
}

inline json poly_to_json(const Poly& q) {
    json out = json::array();
    for (const auto& t : q.terms) {
        json term;
        term["c"] = t.c;
        json m = json::array();
        for (std::size_t v = 0; v < t.m.size(); ++v)
            if (t.m[v]) m.push_back(json::array({v, t.m[v]}));
        term["m"] = m;
        out.push_back(term);
    }
    return out;
}

/// {"p": int, "generators": [{"name": str, "degree": int}], "relations": [POLY]}
inline GradedPresentation load_ring(const json& j) {
    if (!j.is_object() || !j.contains("p") || !j.contains("generators"))
        throw ParseError("ring: expected {\"p\", \"generators\", \"relations\"}");
    std::uint32_t p = j["p"].get<std::uint32_t>();
    std::vector<RingGenerator> gens;
    for (const auto& gj : j["generators"]) {
        if (!gj.is_object() || !gj.contains("name") || !gj.contains("degree"))
            throw ParseError("ring: generator needs \"name\" and \"degree\"");
        gens.push_back({gj["name"].get<std::string>(), gj["degree"].get<int>()});
    }
    PolyRing ring;
    ring.p = p;
    for (const auto& g : gens) ring.degrees.push_back(g.degree);
    std::vector<Poly> rels;
    if (j.contains("relations"))
        for (const auto& rj : j["relations"])
            rels.push_back(load_poly(rj).to_poly(ring));
    return make_presentation(p, gens, rels);
}

inline json ring_to_json(const GradedPresentation& pres) {
    json out;
    out["p"] = pres.p;
    out["generators"] = json::array();
    for (const auto& g : pres.gens)
        out["generators"].push_back({{"name", g.name}, {"degree", g.degree}});
    out["relations"] = json::array();
    for (const auto& r : pres.relations) out["relations"].push_back(poly_to_json(r));
    return out;
}

/// {"elements": [POLY, ...]}
inline std::vector<SparsePoly> load_hsop(const json& j) {
    if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array())
        throw ParseError("hsop: expected {\"elements\": [POLY, ...]}");
    std::vector<SparsePoly> out;
    for (const auto& ej : j["elements"]) out.push_back(load_poly(ej));
    return out;
}

// ---- report pieces -----------------------------------------------------

inline json extint_to_json(const ExtInt& e) {
    if (!e.finite) return json("-inf");
    return json(e.v);
}

inline json type_to_json(const FilterType& t) {
    json out = json::array();
    for (const auto& d : t.d) out.push_back(extint_to_json(d));
    return out;
}

inline json measurement_to_json(const TypeMeasurement& m) {
    json out;
    out["type"] = type_to_json(m.measured);
    out["envelope"] = type_to_json(m.envelope);
    out["mode"] = m.certified ? "certified" : "bounded";
    out["window"] = m.window;
    out["quotient_top"] = m.quotient_top;
    out["depth"] = m.depth_prefix;
    out["note"] = m.note;
    return out;
}

inline json verdict_to_json(const CompletionVerdict& v) {
    json out;
    out["complete"] = v.complete;
    out["N"] = v.N;
    out["alpha"] = extint_to_json(v.alpha);
    out["bound"] = v.bound;
    out["inequality"] = v.strict ? "strict" : "non-strict";
    out["param_degrees"] = v.param_degrees;
    out["reasons"] = v.reasons;
    if (v.measurement) out["measurement"] = measurement_to_json(*v.measurement);
    return out;
}

inline json params_to_json(const ParameterSequence& ps) {
    json out;
    out["degrees"] = ps.degrees;
    out["elements"] = json::array();
    for (const auto& e : ps.elements) out["elements"].push_back(poly_to_json(e));
    return out;
}

inline json betti_to_json(const std::vector<ExtInt>& beta) {
    json out = json::array();
    for (const auto& b : beta) out.push_back(extint_to_json(b));
    return out;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace cohomod::io
