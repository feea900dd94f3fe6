#pragma once

#include <string>
#include <vector>

namespace doi {

/// One verification check: an identity or behaviour with a pinned tolerance.
struct CheckResult {
    int criterion = 0;      // 1..13
    std::string name;
    std::string detail;     // what was measured, grid sizes, notes
    double tolerance = 0.0;
    double measured = 0.0;  // worst-case figure compared against tolerance
    bool pass = false;
    double seconds = 0.0;
};

struct VerifyOptions {
    unsigned long long seed = 12345;
    bool inject_parodi_fault = false; // mutation self-test: forces check 1 to fail
    int only_criterion = 0;           // 0 = all
};

/// Run the verification suite (all thirteen criteria, or a single one).
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

} // namespace doi
