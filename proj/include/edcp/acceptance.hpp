#pragma once

#include <functional>
#include <string>
#include <vector>

#include "edcp/modmath.hpp"

namespace edcp {

// End-to-end verification checks. The full-scale run (scale = 1) is the
// project's release gate; the CLI selftest runs the same checks with trial
// counts scaled down.

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

using CheckProgress = std::function<void(const CheckResult&)>;

std::vector<CheckResult> run_acceptance(double scale, u64 seed, const CheckProgress& progress = {});

}  // namespace edcp
