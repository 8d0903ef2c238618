#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "uli/decompose.hpp"
#include "uli/error.hpp"
#include "uli/invariance.hpp"
#include "uli/logic.hpp"
#include "uli/nabla.hpp"
#include "uli/principles.hpp"
#include "uli/probability.hpp"
#include "uli/rational.hpp"

namespace uli {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void bad_json(const std::string& where, const std::string& what)
{
    throw Error(ErrorKind::InvalidArgument, where + ": " + what);
}

inline const Json& field(const Json& j, const char* key, const std::string& where)
{
    if (!j.is_object())
        bad_json(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        bad_json(where, std::string("missing field \"") + key + "\"");
    return *it;
}

inline int int_field(const Json& j, const char* key, const std::string& where)
{
    const Json& v = field(j, key, where);
    if (!v.is_number_integer())
        bad_json(where, std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}

} // namespace detail

inline Json to_json(const Rational& value) { return format_rational(value); }

/// Accepts "n", "n/d" or a JSON integer.
inline Rational rational_from_json(const Json& j, const std::string& where = "rational")
{
    if (j.is_number_integer())
        return Rational(j.get<long long>());
    if (!j.is_string())
        detail::bad_json(where, "rationals must be strings such as \"1/2\"");
    return parse_rational(j.get<std::string>());
}

inline Json to_json(const std::vector<Rational>& values)
{
    Json out = Json::array();
    for (const auto& v : values)
        out.push_back(format_rational(v));
    return out;
}

inline std::vector<Rational> rational_list_from_json(const Json& j, const std::string& where)
{
    if (!j.is_array())
        detail::bad_json(where, "expected an array of rationals");
    std::vector<Rational> out;
    for (const auto& v : j)
        out.push_back(rational_from_json(v, where));
    return out;
}

inline Json to_json(const StateDescription& sd) { return Json(sd.h); }

inline Json to_json(const UpsilonMatrix& upsilon)
{
    Json rows = Json::array();
    for (const auto& row : upsilon.rows())
        rows.push_back({{"bits", format_bits(row.bits)}, {"mult", row.mult}});
    return {{"nu", upsilon.nu()}, {"rows", rows}};
}

inline UpsilonMatrix upsilon_from_json(const Json& j)
{
    const std::string where = "upsilon";
    const int nu = detail::int_field(j, "nu", where);
    const Json& rows = detail::field(j, "rows", where);
    if (!rows.is_array())
        detail::bad_json(where, "\"rows\" must be an array");
    std::vector<UpsilonMatrix::Row> out;
    for (const auto& row : rows) {
        const Json& bits = detail::field(row, "bits", where);
        if (!bits.is_string())
            detail::bad_json(where, "\"bits\" must be a string of 0/1 digits");
        const int mult = row.contains("mult") ? detail::int_field(row, "mult", where) : 1;
        out.push_back({parse_bits(bits.get<std::string>()), mult});
    }
    return UpsilonMatrix(nu, std::move(out));
}

inline Json to_json(const ProbabilityFunction& w)
{
    switch (w.kind()) {
    case FunctionClass::Product: {
        const auto& x = w.as<ProductFunction>()->point();
        return {{"class", "product"}, {"q", x.level()}, {"x", to_json(x.values())}};
    }
    case FunctionClass::Symmetrized: {
        const auto& c = w.as<SymmetrizedFunction>()->point();
        return {{"class", "symmetrized"}, {"q", c.level()}, {"c", to_json(c.values())}};
    }
    case FunctionClass::Mixture: {
        Json parts = Json::array();
        for (const auto& part : w.as<MixtureFunction>()->parts())
            parts.push_back({{"w", format_rational(part.weight)}, {"f", to_json(part.function)}});
        return {{"class", "mixture"}, {"parts", parts}};
    }
    case FunctionClass::Nabla: {
        const auto* f = w.as<NablaFunction>();
        return {{"class", "nabla"}, {"q", w.level()}, {"upsilon", to_json(f->upsilon())},
                {"replacement", f->with_replacement()}};
    }
    case FunctionClass::Restricted:
        return {{"class", "restricted"}, {"q", w.level()}, {"f", to_json(w.as<RestrictedFunction>()->inner())}};
    case FunctionClass::Table: {
        Json values = Json::array();
        for (const auto& [h, v] : w.as<TableFunction>()->values())
            values.push_back({{"sd", h}, {"value", format_rational(v)}});
        return {{"class", "table"}, {"q", w.level()}, {"values", values}};
    }
    }
    throw Error(ErrorKind::Internal, "unknown function class");
}

namespace detail {

inline SimplexPoint point_field(const Json& j, const char* key, const std::string& where)
{
    auto values = rational_list_from_json(field(j, key, where), where);
    if (j.contains("q"))
        return SimplexPoint(int_field(j, "q", where), std::move(values));
    return SimplexPoint(std::move(values));
}

} // namespace detail

/// Parses a function descriptor: product, symmetrized, mixture, nabla,
/// restricted or table.
inline ProbabilityFunction function_from_json(const Json& j)
{
    const Json& cls = detail::field(j, "class", "function");
    if (!cls.is_string())
        detail::bad_json("function", "\"class\" must be a string");
    const auto name = cls.get<std::string>();
    const std::string where = name + " function";
    if (name == "product")
        return product_function(detail::point_field(j, "x", where));
    if (name == "symmetrized")
        return symmetrized(detail::point_field(j, "c", where));
    if (name == "mixture") {
        const Json& parts = detail::field(j, "parts", where);
        if (!parts.is_array())
            detail::bad_json(where, "\"parts\" must be an array");
        std::vector<MixtureComponent> out;
        for (const auto& part : parts)
            out.push_back({rational_from_json(detail::field(part, "w", where), where),
                           function_from_json(detail::field(part, "f", where))});
        return mixture(std::move(out));
    }
    if (name == "nabla") {
        const int q = detail::int_field(j, "q", where);
        auto upsilon = upsilon_from_json(detail::field(j, "upsilon", where));
        bool replacement = true;
        if (j.contains("replacement")) {
            if (!j["replacement"].is_boolean())
                detail::bad_json(where, "\"replacement\" must be a boolean");
            replacement = j["replacement"].get<bool>();
        }
        return replacement ? nabla(upsilon, q) : nabla_no_replacement(upsilon, q);
    }
    if (name == "restricted")
        return restrict(function_from_json(detail::field(j, "f", where)), detail::int_field(j, "q", where));
    if (name == "table") {
        const int q = detail::int_field(j, "q", where);
        const Json& values = detail::field(j, "values", where);
        if (!values.is_array())
            detail::bad_json(where, "\"values\" must be an array");
        std::map<std::vector<int>, Rational> table;
        for (const auto& entry : values) {
            const Json& sd = detail::field(entry, "sd", where);
            if (!sd.is_array())
                detail::bad_json(where, "\"sd\" must be an array of atom indices");
            std::vector<int> h;
            for (const auto& a : sd) {
                if (!a.is_number_integer())
                    detail::bad_json(where, "atom indices must be integers");
                h.push_back(a.get<int>());
            }
            table[h] = rational_from_json(detail::field(entry, "value", where), where);
        }
        return table_function(q, std::move(table));
    }
    detail::bad_json("function", "unknown class \"" + name + "\"");
}

inline Json to_json(const DiscreteMeasure& rho)
{
    Json out = Json::array();
    for (const auto& [x, w] : rho.support())
        out.push_back({{"x", format_rational(x)}, {"w", format_rational(w)}});
    return out;
}

inline DiscreteMeasure measure_from_json(const Json& j)
{
    const std::string where = "measure";
    if (!j.is_array())
        detail::bad_json(where, "expected an array of {\"x\",\"w\"} objects");
    std::vector<DiscreteMeasure::Atom> atoms;
    for (const auto& a : j)
        atoms.push_back({rational_from_json(detail::field(a, "x", where), where),
                         rational_from_json(detail::field(a, "w", where), where)});
    return DiscreteMeasure(std::move(atoms));
}

inline Json to_json(const CheckReport& report)
{
    Json out{{"principle", std::string(to_string(report.principle))},
             {"bound", report.bound},
             {"outcome", report.pass ? "pass" : "fail"}};
    if (report.principle == Principle::WIP) {
        out["p"] = report.p;
        out["r"] = report.r;
    }
    if (report.witness) {
        const auto& wit = *report.witness;
        Json w{{"theta", to_json(wit.theta)}};
        if (wit.phi)
            w["phi"] = to_json(*wit.phi);
        if (!wit.permutation.empty())
            w["permutation"] = wit.permutation;
        w["lhs"] = format_rational(wit.lhs);
        w["rhs"] = format_rational(wit.rhs);
        out["witness"] = w;
    }
    return out;
}

inline Json to_json(const FeasibilityCertificate& cert)
{
    Json out{{"status", cert.feasible ? "feasible" : "infeasible"},
             {"method", std::string(to_string(cert.method))},
             {"q", cert.target.level()},
             {"r", cert.r},
             {"C", to_json(cert.target.values())}};
    if (cert.feasible)
        out["witness"] = to_json(cert.witness->values());
    else
        out["farkas"] = to_json(cert.farkas);
    out["verified"] = verify_certificate(cert);
    return out;
}

inline Json to_json(const Decomposition& d)
{
    Json p_vectors = Json::array();
    for (const auto& p : d.basis.p_vectors)
        p_vectors.push_back(to_json(p));
    return {{"q", d.q},
            {"lambda", format_rational(d.lambda)},
            {"w1", to_json(d.w1)},
            {"w2", to_json(d.w2)},
            {"g", d.basis.g},
            {"nu", d.nu},
            {"p_vectors", p_vectors},
            {"b", to_json(d.basis.b)},
            {"verification", {{"n", d.verify_n}, {"state_descriptions", d.verified_sds}, {"outcome", "pass"}}}};
}

inline Json to_json(const Error& e)
{
    return {{"error", {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}}}};
}

} // namespace uli
