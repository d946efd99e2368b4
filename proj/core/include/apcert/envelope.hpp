#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace apcert {

/// Uniform wrapper around CLI command results. Machine formats are
/// schema-versioned; the exit code contract is 0 iff all requested checks
/// passed.
struct OutputEnvelope {
    std::string command;
    std::vector<std::string> groups;
    std::string format = "text";  // text | json | csv
    bool pass = true;
    nlohmann::json payload;

    static constexpr const char* kSchemaVersion = "apcert/1";

    nlohmann::json to_json() const;
    int exit_code() const { return pass ? 0 : 1; }
};

/// Minimal structural JSON-schema checker covering the subset the shipped
/// schemas use: type, properties, required, items, enum. Returns an empty
/// string on success, else a description of the first violation.
std::string validate_against_schema(const nlohmann::json& value, const nlohmann::json& schema);

}  // namespace apcert
