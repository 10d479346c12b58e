#pragma once

// End-to-end acceptance criteria, shared by the `suite` subcommand and the
// acceptance test binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ageom/json_io.hpp"

namespace ageom {

struct AcceptanceOptions {
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    bool checks_pass = false;   ///< every numerical check
    double budget_seconds = 0.0; ///< 0: no runtime bound
    double seconds = 0.0;
    std::string summary;
    json details;

    bool within_budget() const noexcept { return budget_seconds <= 0.0 || seconds < budget_seconds; }
    bool pass() const noexcept { return checks_pass && within_budget(); }
};

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<CriterionResult(const AcceptanceOptions&)> run;
};

const std::vector<Criterion>& acceptance_criteria();

/// Runs one criterion and fills in timing.
CriterionResult run_criterion(const Criterion& c, const AcceptanceOptions& opts);

} // namespace ageom
