#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "loopalg/dga.hpp"

namespace loopalg {

namespace detail {

inline ParseError schema_error(const std::string& what) { return ParseError(ParseError::Kind::schema, what); }

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) throw schema_error(std::string("missing field '") + key + "'");
    return obj.at(key);
}

inline FieldSpec parse_field(const nlohmann::json& f) {
    if (f.is_string()) {
        auto s = f.get<std::string>();
        if (s == "q" || s == "Q") return FieldSpec::rationals();
        throw schema_error("unknown field '" + s + "'");
    }
    if (f.is_object() && f.contains("fp") && f.at("fp").is_number_integer()) {
        auto p = f.at("fp").get<long long>();
        if (p < 2) throw ParseError(ParseError::Kind::not_prime, "not a prime: " + std::to_string(p));
        return FieldSpec::prime(static_cast<std::uint64_t>(p));
    }
    throw schema_error("field must be \"q\" or {\"fp\": p}");
}

inline Scalar parse_coeff(const FieldSpec& field, const nlohmann::json& c) {
    if (c.is_string()) return Scalar::parse(field, c.get<std::string>());
    if (c.is_number_integer()) return Scalar::from_int(field, c.get<long>());
    throw ParseError(ParseError::Kind::bad_scalar, "coefficient must be a string or an integer");
}

}  // namespace detail

/// Reads the JSON algebra description. Degrees in the file are cohomological.
/// The result is in canonical order and is not validated.
inline FDGA parse_algebra_file(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(ParseError::Kind::malformed_json, e.what());
    }
    if (!j.is_object()) throw detail::schema_error("top level must be an object");
    FDGA a;
    try {
        a.name = detail::require(j, "name").get<std::string>();
        a.field = detail::parse_field(detail::require(j, "field"));
        a.formal_dimension = detail::require(j, "formal_dimension").get<int>();
        const auto& gens = detail::require(j, "generators");
        if (!gens.is_array()) throw detail::schema_error("'generators' must be an array");
        for (const auto& g : gens) {
            auto label = detail::require(g, "name").get<std::string>();
            if (a.basis.find(label))
                throw ParseError(ParseError::Kind::duplicate_label, "duplicate generator '" + label + "'");
            a.basis.add(label, -detail::require(g, "degree").get<int>());
        }
    } catch (const nlohmann::json::type_error& e) {
        throw detail::schema_error(e.what());
    }
    a.differential.resize(a.dim());
    auto index = [&](const nlohmann::json& v) {
        if (!v.is_string()) throw detail::schema_error("generator references must be strings");
        auto label = v.get<std::string>();
        auto i = a.basis.find(label);
        if (!i) throw ParseError(ParseError::Kind::unknown_label, "unknown generator '" + label + "'");
        return *i;
    };
    auto result = [&](const nlohmann::json& r) {
        if (!r.is_array()) throw detail::schema_error("'result' must be an array");
        Combination c;
        for (const auto& t : r) accumulate(c, index(detail::require(t, "gen")), detail::parse_coeff(a.field, detail::require(t, "coeff")));
        return c;
    };
    if (j.contains("products")) {
        for (const auto& p : j.at("products")) {
            auto key = std::make_pair(index(detail::require(p, "left")), index(detail::require(p, "right")));
            if (a.products.count(key))
                throw detail::schema_error("product " + a.basis.label(key.first) + "*" + a.basis.label(key.second) + " given twice");
            auto c = result(detail::require(p, "result"));
            if (!c.empty()) a.products[key] = std::move(c);
        }
    }
    if (j.contains("differential")) {
        std::set<std::size_t> seen;
        for (const auto& dj : j.at("differential")) {
            auto s = index(detail::require(dj, "source"));
            if (!seen.insert(s).second) throw detail::schema_error("differential of " + a.basis.label(s) + " given twice");
            a.differential[s] = result(detail::require(dj, "result"));
        }
    }
    return canonicalize(a);
}

inline nlohmann::json field_to_json(const FieldSpec& f) {
    if (f.is_rational()) return "q";
    return {{"fp", f.p}};
}

/// Inverse of parse_algebra_file (up to canonical ordering).
inline nlohmann::json algebra_to_json(const FDGA& a) {
    nlohmann::json j;
    j["name"] = a.name;
    j["field"] = field_to_json(a.field);
    j["formal_dimension"] = a.formal_dimension;
    j["generators"] = nlohmann::json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) j["generators"].push_back({{"name", a.basis.label(i)}, {"degree", a.upper(i)}});
    auto result = [&](const Combination& c) {
        auto r = nlohmann::json::array();
        for (const auto& [k, v] : c) r.push_back({{"gen", a.basis.label(k)}, {"coeff", v.to_string()}});
        return r;
    };
    j["products"] = nlohmann::json::array();
    for (const auto& [key, c] : a.products)
        j["products"].push_back({{"left", a.basis.label(key.first)}, {"right", a.basis.label(key.second)}, {"result", result(c)}});
    j["differential"] = nlohmann::json::array();
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (!a.d(i).empty()) j["differential"].push_back({{"source", a.basis.label(i)}, {"result", result(a.d(i))}});
    return j;
}

}  // namespace loopalg
