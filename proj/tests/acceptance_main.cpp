// Acceptance gate: runs every validation criterion at its pinned tolerance
// and prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <iostream>

#include "linflow/acceptance.hpp"

int main() {
    const auto results = linflow::acceptance::run_all(std::cout);
    const bool ok = linflow::acceptance::all_passed(results);
    std::cout << (ok ? "ACCEPTANCE: all criteria passed\n"
                     : "ACCEPTANCE: FAILURES present\n");
    return ok ? 0 : 1;
}
