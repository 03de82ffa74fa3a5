// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status is the number of failing criteria (capped at 125).

#include <cstdio>
#include <cstdlib>
#include <string>

#include "wdk/acceptance.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = 20240611;
    if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
    int failed = 0;
    for (const auto& r : wdk::run_acceptance(seed)) {
        std::printf("[%s] criterion %2d %-36s %7.3fs (limit %.0fs)%s%s\n", r.pass() ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                    r.limit_seconds, r.error.empty() ? "" : "  error: ", r.error.c_str());
        if (!r.pass()) {
            ++failed;
            std::printf("       %s\n", r.details.dump().c_str());
        }
    }
    std::printf("%d of %d criteria passed\n", wdk::acceptance_criterion_count() - failed, wdk::acceptance_criterion_count());
    return failed > 125 ? 125 : failed;
}
