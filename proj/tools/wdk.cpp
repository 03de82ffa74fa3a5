// Command-line front end: one subcommand per job, input as a JSON file (or
// "-" for stdin), report on stdout, diagnostics on stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>

#include "CLI11.hpp"
#include "jobs.hpp"

namespace {

constexpr const char* kPrecisionEnv = "WDK_PRECISION";

std::optional<int> env_precision() {
    const char* v = std::getenv(kPrecisionEnv);
    if (!v || !*v) return std::nullopt;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1 || n > 1000) throw std::invalid_argument(std::string(kPrecisionEnv) + " must be an integer in [1, 1000]");
    return static_cast<int>(n);
}

nlohmann::json read_input(const std::string& path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot open " + path);
        text.assign(std::istreambuf_iterator<char>(f), {});
    }
    return nlohmann::json::parse(text);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace wdk::cli;
    CLI::App app{"Witt vectors, displays and G-displays: computations and checks on JSON inputs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "wdk 1.0 (report schema wdk.report/1)");

    JobOptions opts;
    int precision = 0;
    std::string format = "json";
    bool pretty = false;
    app.add_option("--precision", precision, "Witt length or p-adic precision; overrides the input and $" + std::string(kPrecisionEnv))
        ->check(CLI::Range(1, 1000));
    app.add_option("--seed", opts.seed, "Seed for sampled checks")->capture_default_str();
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    app.add_flag("--pretty", pretty, "Indent JSON reports");

    std::map<std::string, std::string> inputs;
    for (const auto& name : subcommands()) {
        CLI::App* sub = app.add_subcommand(name, "Run the " + name + " job (input schema " + schema_id(name) + ")");
        if (name == "selftest") {
            sub->add_option("input", inputs[name], "Optional JSON input, - for stdin");
            sub->add_option("--only", opts.only, "Criteria ids to run")->check(CLI::Range(1, 10));
            sub->add_flag("--timings", opts.timings, "Include wall-clock timings (not reproducible)");
        } else {
            sub->add_option("input", inputs[name], "JSON input file, - for stdin")->required();
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInvalidInput;
    }
    if (app.count("--precision")) opts.precision = precision;

    const std::string name = app.get_subcommands().front()->get_name();
    JobOutcome out;
    try {
        opts.default_precision = env_precision();
        const std::string& path = inputs[name];
        out = run_job(name, path.empty() ? nlohmann::json::object() : read_input(path), opts);
    } catch (const std::exception& e) {
        std::cerr << "wdk " << name << ": " << e.what() << "\n";
        return kInvalidInput;
    }
    for (const auto& d : out.diagnostics) std::cerr << "wdk " << name << ": " << d << "\n";
    if (format == "text") std::cout << render_text(out.report);
    else std::cout << out.report.dump(pretty ? 2 : -1) << "\n";
    return out.exit_code;
}
