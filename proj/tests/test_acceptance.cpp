#include "jetcl/acceptance.hpp"

#include <iostream>

int main() {
    bool all = true;
    jetcl::run_acceptance({}, [&](const jetcl::CriterionResult& r) {
        std::cout << jetcl::format_result(r) << std::endl;
        all = all && r.passed;
    });
    std::cout << (all ? "all criteria passed" : "some criteria failed") << std::endl;
    return all ? 0 : 1;
}
