#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "ageom/acceptance.hpp"

int main(int argc, char** argv)
{
    int only = 0;
    ageom::AcceptanceOptions opts;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
            opts.seed = std::strtoull(argv[++i], nullptr, 10);
        else {
            std::cerr << "usage: " << argv[0] << " [--criterion N] [--seed S]\n";
            return 1;
        }
    }
    bool all = true;
    for (const auto& c : ageom::acceptance_criteria()) {
        if (only != 0 && c.id != only)
            continue;
        const ageom::CriterionResult r = ageom::run_criterion(c, opts);
        all = all && r.pass();
        std::cout << "criterion " << r.id << " [" << r.title << "]: " << (r.pass() ? "PASS" : "FAIL") << " - "
                  << r.summary << " (" << r.seconds << " s";
        if (r.budget_seconds > 0.0)
            std::cout << ", budget " << r.budget_seconds << " s";
        std::cout << ")\n";
    }
    return all ? 0 : 1;
}
