// Acceptance suite: runs the thirteen verification criteria at their pinned
// tolerances and prints one pass/fail line per criterion. Exit status is the
// number of failing criteria. An optional argument selects one criterion.

#include "doi/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
    doi::VerifyOptions opts;
    if (argc > 1) opts.only_criterion = std::atoi(argv[1]);

    const std::vector<doi::CheckResult> results = doi::run_verification(opts);
    int failures = 0;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d %-38s measured %-12.5g tol %-8.3g (%.2f s)\n",
                    r.pass ? "PASS" : "FAIL", r.criterion, r.name.c_str(), r.measured,
                    r.tolerance, r.seconds);
        std::printf("       %s\n", r.detail.c_str());
        if (!r.pass) ++failures;
    }
    if (failures > 0)
        std::printf("%d criterion(s) failed\n", failures);
    else
        std::printf("all criteria passed\n");
    return failures;
}
