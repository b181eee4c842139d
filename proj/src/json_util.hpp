#pragma once

#include <json.hpp>
#include <string>

#include "stf/cyclotomic.hpp"
#include "stf/errors.hpp"
#include "stf/rational.hpp"

namespace stf::detail {

using json = nlohmann::json;

inline const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
    return j.at(key);
}

inline Q to_q(const json& j, const std::string& where) {
    try {
        if (j.is_number_integer()) return Q(j.get<long>());
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
        throw SchemaError(where + ": " + e.what());
    }
    throw SchemaError(where + ": expected a rational (integer or \"p/q\" string)");
}

inline QVec to_qvec(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where + ": expected an array");
    QVec v;
    for (const auto& x : j) v.push_back(to_q(x, where));
    return v;
}

inline QMat to_qmat(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where + ": expected a matrix");
    QMat m;
    for (const auto& r : j) m.push_back(to_qvec(r, where));
    return m;
}

inline json from_q(const Q& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return json(q.get_num().get_si());
    return json(q.get_str());
}

inline json from_qvec(const QVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(from_q(x));
    return a;
}

inline int to_int(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
    return j.get<int>();
}

inline std::string to_str(const json& j, const std::string& where) {
    if (!j.is_string()) throw SchemaError(where + ": expected a string");
    return j.get<std::string>();
}

inline bool to_bool(const json& j, const std::string& where) {
    if (!j.is_boolean()) throw SchemaError(where + ": expected a boolean");
    return j.get<bool>();
}

// unit-modulus or general cyclotomic scalar: integer, "p/q", or {"i_power": k}
// (i^k) or {"turns": "p/q"} (e^{2 pi i p/q}), optionally with "scale"
inline Cyc to_cyc(const json& j, const std::string& where) {
    if (j.is_object()) {
        Cyc base(1);
        if (j.contains("i_power")) base = Cyc::root_of_unity(4, to_int(j.at("i_power"), where));
        else if (j.contains("turns")) base = Cyc::exp_turns(to_q(j.at("turns"), where));
        else throw SchemaError(where + ": expected i_power or turns");
        if (j.contains("scale")) base *= Cyc(to_q(j.at("scale"), where));
        return base;
    }
    return Cyc(to_q(j, where));
}

inline void check_schema(const json& doc, const std::string& expected) {
    if (!doc.is_object() || !doc.contains("schema") || !doc.at("schema").is_string())
        throw SchemaError("document has no schema field");
    if (doc.at("schema").get<std::string>() != expected)
        throw SchemaError("schema '" + doc.at("schema").get<std::string>() + "' where '" + expected +
                          "' was expected");
}

inline json parse_json(const std::string& text, const std::string& where) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(where + ": " + e.what());
    }
}

}  // namespace stf::detail
