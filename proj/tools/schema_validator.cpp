#include "schema_validator.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace wdk::cli {

using nlohmann::json;

// Generated from schemas/v1 at configure time.
const std::map<std::string, std::string>& embedded_schema_sources();

std::string SchemaIssue::str() const { return (path.empty() ? std::string("/") : path) + ": " + message; }

void SchemaRegistry::add(json schema) {
    if (!schema.is_object() || !schema.contains("$id") || !schema["$id"].is_string())
        throw std::invalid_argument("schema without a string $id");
    const std::string id = schema["$id"].get<std::string>();
    docs_[id] = std::move(schema);
}

const json& SchemaRegistry::get(const std::string& id) const {
    auto it = docs_.find(id);
    if (it == docs_.end()) throw std::out_of_range("unknown schema " + id);
    return it->second;
}

std::vector<std::string> SchemaRegistry::ids() const {
    std::vector<std::string> out;
    for (const auto& [id, _] : docs_) out.push_back(id);
    return out;
}

std::vector<SchemaIssue> SchemaRegistry::validate(const json& instance, const std::string& id) const {
    std::vector<SchemaIssue> out;
    check(instance, get(id), id, "", out);
    return out;
}

std::pair<const json*, std::string> SchemaRegistry::resolve(const std::string& ref, const std::string& doc) const {
    const auto hash = ref.find('#');
    const std::string target = hash == 0 ? doc : ref.substr(0, hash);
    const std::string fragment = hash == std::string::npos ? "" : ref.substr(hash + 1);
    const json& root = get(target);
    if (fragment.empty()) return {&root, target};
    return {&root.at(json::json_pointer(fragment)), target};
}

namespace {

std::string type_name(const json& j) {
    if (j.is_null()) return "null";
    if (j.is_boolean()) return "boolean";
    if (j.is_number_integer()) return "integer";
    if (j.is_number()) return "number";
    if (j.is_string()) return "string";
    if (j.is_array()) return "array";
    return "object";
}

bool has_type(const json& j, const std::string& t) {
    if (t == "number") return j.is_number();
    if (t == "integer") return j.is_number_integer();
    return type_name(j) == t;
}

std::string pointer_token(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

std::string brief(const json& j) {
    std::string s = j.dump();
    return s.size() > 60 ? s.substr(0, 57) + "..." : s;
}

// Among failing alternatives the one that got further into the instance
// usually names the real mistake.
size_t deepest(const std::vector<SchemaIssue>& v) {
    size_t d = 0;
    for (const auto& i : v) d = std::max(d, i.path.size());
    return d;
}

}  // namespace

void SchemaRegistry::check(const json& inst, const json& schema, const std::string& doc, const std::string& path,
                           std::vector<SchemaIssue>& out) const {
    if (schema.is_boolean()) {
        if (!schema.get<bool>()) out.push_back({path, "no value is allowed here"});
        return;
    }
    if (auto it = schema.find("$ref"); it != schema.end()) {
        auto [target, target_doc] = resolve(it->get<std::string>(), doc);
        check(inst, *target, target_doc, path, out);
    }
    if (auto it = schema.find("type"); it != schema.end()) {
        bool ok = false;
        if (it->is_string()) ok = has_type(inst, it->get<std::string>());
        else
            for (const auto& t : *it) ok = ok || has_type(inst, t.get<std::string>());
        if (!ok) {
            out.push_back({path, "expected " + (it->is_string() ? it->get<std::string>() : it->dump()) + ", got " + type_name(inst)});
            return;
        }
    }
    if (auto it = schema.find("const"); it != schema.end() && inst != *it)
        out.push_back({path, "must equal " + it->dump()});
    if (auto it = schema.find("enum"); it != schema.end()) {
        bool found = false;
        for (const auto& v : *it) found = found || v == inst;
        if (!found) out.push_back({path, brief(inst) + " is not one of " + it->dump()});
    }
    if (inst.is_number()) {
        const double x = inst.get<double>();
        if (auto it = schema.find("minimum"); it != schema.end() && x < it->get<double>())
            out.push_back({path, brief(inst) + " is below the minimum " + it->dump()});
        if (auto it = schema.find("maximum"); it != schema.end() && x > it->get<double>())
            out.push_back({path, brief(inst) + " is above the maximum " + it->dump()});
    }
    if (inst.is_object()) {
        if (auto it = schema.find("required"); it != schema.end())
            for (const auto& k : *it)
                if (!inst.contains(k.get<std::string>())) out.push_back({path, "missing required property \"" + k.get<std::string>() + "\""});
        const json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
        for (const auto& [k, v] : inst.items()) {
            const std::string sub = path + "/" + pointer_token(k);
            if (props && props->contains(k)) {
                check(v, (*props)[k], doc, sub, out);
            } else if (auto ap = schema.find("additionalProperties"); ap != schema.end()) {
                if (ap->is_boolean() && !ap->get<bool>()) out.push_back({sub, "unknown property"});
                else if (ap->is_object()) check(v, *ap, doc, sub, out);
            }
        }
    }
    if (inst.is_array()) {
        const auto n = inst.size();
        if (auto it = schema.find("minItems"); it != schema.end() && n < it->get<size_t>())
            out.push_back({path, "needs at least " + it->dump() + " items, has " + std::to_string(n)});
        if (auto it = schema.find("maxItems"); it != schema.end() && n > it->get<size_t>())
            out.push_back({path, "allows at most " + it->dump() + " items, has " + std::to_string(n)});
        if (auto it = schema.find("uniqueItems"); it != schema.end() && it->get<bool>()) {
            std::set<std::string> seen;
            for (const auto& v : inst)
                if (!seen.insert(v.dump()).second) out.push_back({path, "duplicate item " + brief(v)});
        }
        if (auto it = schema.find("items"); it != schema.end())
            for (size_t i = 0; i < n; ++i) check(inst[i], *it, doc, path + "/" + std::to_string(i), out);
    }
    if (auto it = schema.find("allOf"); it != schema.end())
        for (const auto& s : *it) check(inst, s, doc, path, out);
    for (const char* kw : {"anyOf", "oneOf"}) {
        auto it = schema.find(kw);
        if (it == schema.end()) continue;
        int matches = 0;
        std::vector<SchemaIssue> closest;
        bool have_closest = false;
        for (const auto& s : *it) {
            std::vector<SchemaIssue> branch;
            check(inst, s, doc, path, branch);
            if (branch.empty()) ++matches;
            else if (!have_closest || branch.size() < closest.size() ||
                     (branch.size() == closest.size() && deepest(branch) > deepest(closest))) {
                closest = std::move(branch);
                have_closest = true;
            }
        }
        const bool one = std::string(kw) == "oneOf";
        if (matches == 0) {
            out.push_back({path, "matches none of the " + std::to_string(it->size()) + " allowed forms; closest form fails with:"});
            for (auto& c : closest) out.push_back({c.path, "  " + c.message});
        } else if (one && matches > 1) {
            out.push_back({path, "matches " + std::to_string(matches) + " of the allowed forms, exactly one is required"});
        }
    }
}

const SchemaRegistry& builtin_schemas() {
    static const SchemaRegistry reg = [] {
        SchemaRegistry r;
        for (const auto& [name, text] : embedded_schema_sources()) r.add(json::parse(text));
        return r;
    }();
    return reg;
}

}  // namespace wdk::cli
