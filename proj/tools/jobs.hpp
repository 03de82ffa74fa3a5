#pragma once
// Subcommand jobs: validate a JSON input against its versioned schema, run
// the computation and assemble a deterministic report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace wdk::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kInvalidInput = 2, kPrecision = 3 };

struct JobOptions {
    std::optional<int> precision;          // --precision, overrides the input
    std::optional<int> default_precision;  // from the environment, used when the input is silent
    std::uint64_t seed = 20240611;
    bool timings = false;                  // selftest: include wall-clock data (not reproducible)
    std::vector<int> only;                 // selftest: criteria to run
};

struct JobOutcome {
    int exit_code = kOk;
    nlohmann::json report;                 // null unless a report was produced
    std::vector<std::string> diagnostics;  // schema issues or the error message
};

const std::vector<std::string>& subcommands();
std::string schema_id(const std::string& subcommand);

JobOutcome run_job(const std::string& subcommand, const nlohmann::json& input, const JobOptions& opts);

std::string render_text(const nlohmann::json& report);

}  // namespace wdk::cli
