#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace logspring {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Invariant suites run by `logspring check`. Each check uses fixed
/// configurations and a fixed-seed generator, so results are reproducible.
std::vector<CheckResult> oscillator_checks();
std::vector<CheckResult> econ_checks();
std::vector<CheckResult> tsallis_checks();

/// "oscillator", "econ", "tsallis" or "all"; anything else throws InputError.
std::vector<CheckResult> run_checks(std::string_view suite);

} // namespace logspring
