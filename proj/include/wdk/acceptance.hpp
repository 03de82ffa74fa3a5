#pragma once
// The ten end-to-end acceptance criteria, each a seeded randomized or
// exhaustive experiment with a pinned sample count, tolerance and time limit.
// Shared by the acceptance test binary and the `selftest` subcommand.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace wdk {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool correct = false;       // every sampled identity held
    double seconds = 0;
    double limit_seconds = 0;
    nlohmann::json details;     // counts of samples, disagreements, anchors
    std::string error;          // unexpected exception, if any

    bool within_time() const { return seconds < limit_seconds; }
    bool pass() const { return correct && within_time() && error.empty(); }
    nlohmann::json to_json() const;
};

// Criteria ids are 1..10; an empty selection runs all of them, in id order.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, const std::vector<int>& only = {});
int acceptance_criterion_count();

}  // namespace wdk
