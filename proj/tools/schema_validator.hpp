#pragma once
// A validator for the subset of JSON Schema (draft 2020-12) used by the
// files under schemas/: type, enum, const, properties, required,
// additionalProperties, items, minItems, maxItems, uniqueItems, minimum,
// maximum, allOf, anyOf, oneOf and $ref (fragment pointers, within a document
// or into another registered document by its $id). Other keywords are ignored.

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace wdk::cli {

struct SchemaIssue {
    std::string path;     // JSON pointer into the instance, "" for the root
    std::string message;
    std::string str() const;
};

class SchemaRegistry {
public:
    // Registers a schema under its "$id".
    void add(nlohmann::json schema);
    bool contains(const std::string& id) const { return docs_.count(id) > 0; }
    const nlohmann::json& get(const std::string& id) const;
    std::vector<std::string> ids() const;

    std::vector<SchemaIssue> validate(const nlohmann::json& instance, const std::string& id) const;

private:
    void check(const nlohmann::json& inst, const nlohmann::json& schema, const std::string& doc, const std::string& path,
               std::vector<SchemaIssue>& out) const;
    std::pair<const nlohmann::json*, std::string> resolve(const std::string& ref, const std::string& doc) const;

    std::map<std::string, nlohmann::json> docs_;
};

// The schemas shipped in schemas/v1, compiled into the binary.
const SchemaRegistry& builtin_schemas();

}  // namespace wdk::cli
