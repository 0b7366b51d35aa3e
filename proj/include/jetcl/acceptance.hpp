#pragma once

#include "jetcl/eval.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace jetcl {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 42;
    int random_pairs = 200;
    /// Criterion ids to run; all when empty.
    std::vector<int> only;
};

/// Title of an acceptance criterion, 1 to 9.
std::string criterion_title(int id);

CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});

/// Runs the selected criteria in order; `progress` is called after each one.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            const std::function<void(const CriterionResult&)>& progress = {});

/// One line: "criterion N PASS|FAIL title (detail) [seconds]".
std::string format_result(const CriterionResult& r);

}  // namespace jetcl
