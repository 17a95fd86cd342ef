#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace etcsim {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct AcceptanceOptions {
    std::uint64_t seed = 1;
    std::size_t trials = 8;
    double dt = 2e-3;
    double horizon = 2000.0;
};

/// Runs the acceptance criteria in order. When out is non-null, one
/// "PASS|FAIL [id] name: detail" line is written per criterion as soon as it
/// completes.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options, std::ostream* out);

}  // namespace etcsim
