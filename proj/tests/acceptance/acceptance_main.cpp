#include <cstdlib>
#include <iostream>

#include "etcsim/acceptance.hpp"

int main() {
    const auto results = etcsim::run_acceptance({}, &std::cout);
    std::size_t failed = 0;
    for (const auto& r : results) failed += !r.pass;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
