#include <cstdlib>
#include <iostream>

#include "dagger/acceptance.hpp"

int main(int argc, char** argv) {
    std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20240601ULL;
    int failed = 0;
    dagger::run_acceptance(seed, [&](const dagger::CriterionResult& r) {
        std::cout << dagger::format_criterion(r) << std::endl;
        failed += !r.pass();
    });
    std::cout << (failed ? "FAIL" : "PASS") << ": " << 7 - failed << "/7 criteria" << std::endl;
    return failed ? 1 : 0;
}
