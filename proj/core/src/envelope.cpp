#include "apcert/envelope.hpp"

namespace apcert {

nlohmann::json OutputEnvelope::to_json() const {
    return {{"schema", kSchemaVersion}, {"command", command}, {"groups", groups},
            {"format", format},         {"pass", pass},       {"payload", payload}};
}

namespace {

bool type_matches(const nlohmann::json& value, const std::string& type) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "number") return value.is_number();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    return false;
}

std::string validate_at(const nlohmann::json& value, const nlohmann::json& schema,
                        const std::string& path) {
    if (schema.contains("type")) {
        const auto& t = schema.at("type");
        bool ok = false;
        if (t.is_string())
            ok = type_matches(value, t.get<std::string>());
        else if (t.is_array())
            for (const auto& cand : t) ok = ok || type_matches(value, cand.get<std::string>());
        if (!ok) return path + ": expected type " + t.dump() + ", got " + value.type_name();
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& cand : schema.at("enum")) ok = ok || cand == value;
        if (!ok) return path + ": value not in enum";
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema.at("required"))
                if (!value.contains(key.get<std::string>()))
                    return path + ": missing required key '" + key.get<std::string>() + "'";
        if (schema.contains("properties")) {
            for (auto it = schema.at("properties").begin(); it != schema.at("properties").end();
                 ++it) {
                if (!value.contains(it.key())) continue;
                auto err = validate_at(value.at(it.key()), it.value(), path + "/" + it.key());
                if (!err.empty()) return err;
            }
        }
    }
    if (value.is_array() && schema.contains("items")) {
        for (size_t i = 0; i < value.size(); ++i) {
            auto err =
                validate_at(value[i], schema.at("items"), path + "[" + std::to_string(i) + "]");
            if (!err.empty()) return err;
        }
    }
    return "";
}

}  // namespace

std::string validate_against_schema(const nlohmann::json& value, const nlohmann::json& schema) {
    return validate_at(value, schema, "$");
}

}  // namespace apcert
