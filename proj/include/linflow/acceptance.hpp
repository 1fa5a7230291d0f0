#ifndef LINFLOW_ACCEPTANCE_HPP
#define LINFLOW_ACCEPTANCE_HPP

#include <iosfwd>
#include <string>
#include <vector>

// End-to-end validation suite: every closed form, the blowup estimator, the
// classifier, the spectral machinery and the Lagrangian maps checked against
// the numerical oracle at pinned tolerances. Run via `linflow validate` or
// the acceptance test binary.

namespace linflow::acceptance {

struct CriterionResult {
    int id;
    std::string name;
    bool passed;
    std::string detail;
};

/// Runs all criteria, printing one pass/fail line each to `log`.
std::vector<CriterionResult> run_all(std::ostream& log, unsigned jobs = 0);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace linflow::acceptance

#endif  // LINFLOW_ACCEPTANCE_HPP
