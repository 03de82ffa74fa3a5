#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "jobs.hpp"
#include "schema_validator.hpp"

using namespace wdk::cli;
using nlohmann::json;

namespace {

SchemaRegistry toy_registry() {
    SchemaRegistry r;
    r.add(json::parse(R"({
        "$id": "urn:test:common",
        "$defs": {"small": {"type": "integer", "minimum": 0, "maximum": 9}}
    })"));
    r.add(json::parse(R"({
        "$id": "urn:test:root",
        "type": "object", "additionalProperties": false, "required": ["a"],
        "properties": {
            "a": {"$ref": "urn:test:common#/$defs/small"},
            "b": {"type": "array", "items": {"$ref": "#/$defs/word"}, "minItems": 1, "uniqueItems": true},
            "c": {"oneOf": [{"type": "integer"}, {"type": "array", "items": {"type": "integer"}}]},
            "d": {"enum": ["x", "y"]},
            "e": {"const": 1}
        },
        "$defs": {"word": {"type": "string"}}
    })"));
    return r;
}

std::vector<std::string> issues(const SchemaRegistry& r, const json& j) {
    std::vector<std::string> out;
    for (auto& i : r.validate(j, "urn:test:root")) out.push_back(i.str());
    return out;
}

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
    for (auto& s : v)
        if (s.find(needle) != std::string::npos) return true;
    return false;
}

json slopes_input() { return json::parse(R"({"p": 2, "r": 1, "matrix": [[0, 1], [2, 0]]})"); }

}  // namespace

TEST_CASE("schema subset validator") {
    const auto r = toy_registry();
    CHECK(issues(r, json::parse(R"({"a": 3, "b": ["u", "v"], "c": [1, 2], "d": "x", "e": 1})")).empty());

    CHECK(mentions(issues(r, json::parse(R"({})")), "missing required property \"a\""));
    CHECK(mentions(issues(r, json::parse(R"({"a": 10})")), "/a: 10 is above the maximum"));
    CHECK(mentions(issues(r, json::parse(R"({"a": "3"})")), "/a: expected integer, got string"));
    CHECK(mentions(issues(r, json::parse(R"({"a": 1, "z": 0})")), "/z: unknown property"));
    CHECK(mentions(issues(r, json::parse(R"({"a": 1, "b": []})")), "/b: needs at least 1 items"));
    CHECK(mentions(issues(r, json::parse(R"({"a": 1, "b": ["u", "u"]})")), "duplicate item"));
    CHECK(mentions(issues(r, json::parse(R"({"a": 1, "b": ["u", 2]})")), "/b/1: expected string"));
    CHECK(mentions(issues(r, json::parse(R"({"a": 1, "c": [1, "x"]})")), "/c: matches none of the 2 allowed forms"));
    CHECK(mentions(issues(r, json::parse(R"({"a": 1, "c": [1, "x"]})")), "/c/1"));
    CHECK(mentions(issues(r, json::parse(R"({"a": 1, "d": "w"})")), "is not one of"));
    CHECK(mentions(issues(r, json::parse(R"({"a": 1, "e": 2})")), "must equal 1"));
}

TEST_CASE("oneOf rejects ambiguous matches") {
    SchemaRegistry r;
    r.add(json::parse(R"({"$id": "urn:test:root", "oneOf": [{"type": "integer"}, {"minimum": 0}]})"));
    CHECK(r.validate(json(-1), "urn:test:root").empty());
    auto v = r.validate(json(1), "urn:test:root");
    REQUIRE(v.size() == 1);
    CHECK(v[0].message.find("exactly one") != std::string::npos);
}

TEST_CASE("every subcommand has an embedded schema") {
    const auto& reg = builtin_schemas();
    for (const auto& s : subcommands()) CHECK(reg.contains(schema_id(s)));
    CHECK(reg.contains("urn:wdk:v1:common"));
    CHECK(reg.contains("urn:wdk:v1:report"));
}

TEST_CASE("slopes of the supersingular isocrystal") {
    const auto out = run_job("slopes", slopes_input(), JobOptions{});
    CHECK(out.exit_code == kOk);
    CHECK(out.report["slopes"] == json::parse(R"([["1/2", 2]])"));
    CHECK(out.report["pass"] == true);
    CHECK(builtin_schemas().validate(out.report, "urn:wdk:v1:report").empty());
}

TEST_CASE("checks are sorted and reports are reproducible") {
    JobOptions opts;
    opts.seed = 7;
    const json in = json::parse(R"({"kind": "witt", "ring": {"kind": "Fq", "p": 2, "r": 2}, "length": 3, "samples": 4})");
    const auto a = run_job("frame", in, opts), b = run_job("frame", in, opts);
    CHECK(a.report.dump() == b.report.dump());
    const auto& checks = a.report["checks"];
    REQUIRE(checks.size() > 3);
    for (size_t i = 1; i < checks.size(); ++i) CHECK(checks[i - 1]["id"].get<std::string>() < checks[i]["id"].get<std::string>());
}

TEST_CASE("exit codes") {
    SUBCASE("schema violation") {
        const auto out = run_job("adjoint-nilpotence", json::parse(R"({"datum": {"preset": "GL", "h": "two"}, "ring": {"kind": "Fq", "p": 2}, "U": 1})"),
                                 JobOptions{});
        CHECK(out.exit_code == kInvalidInput);
        CHECK(mentions(out.diagnostics, "/datum"));
        CHECK(out.report["pass"] == false);
    }
    SUBCASE("precision beyond 64-bit arithmetic") {
        JobOptions opts;
        opts.precision = 200;
        CHECK(run_job("slopes", slopes_input(), opts).exit_code == kPrecision);
    }
    SUBCASE("Witt coordinates shorter than the precision") {
        JobOptions opts;
        opts.precision = 4;
        const json in = json::parse(R"({"ring": {"kind": "Fq", "p": 3}, "x": [1, 2]})");
        CHECK(run_job("witt", in, opts).exit_code == kPrecision);
    }
    SUBCASE("in-band mathematical failure") {
        const json in = json::parse(R"({"ring": {"kind": "Fq", "p": 2}, "length": 2, "rank0": 1, "psi": [[1, 0], [0, 1]]})");
        const auto out = run_job("nilpotence", in, JobOptions{});
        CHECK(out.exit_code == kOk);
        CHECK(out.report["pass"] == false);
    }
}

TEST_CASE("precision resolution order") {
    const json in = json::parse(R"({"ring": {"kind": "Fq", "p": 5}, "x": 7, "length": 2})");
    JobOptions opts;
    opts.default_precision = 4;
    CHECK(run_job("witt", in, opts).report["precision"] == 2);
    opts.precision = 3;
    CHECK(run_job("witt", in, opts).report["precision"] == 3);
    json silent = in;
    silent.erase("length");
    opts.precision.reset();
    CHECK(run_job("witt", silent, opts).report["precision"] == 4);
}
