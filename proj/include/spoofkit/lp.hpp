#pragma once

#include <cstdint>
#include <vector>

#include "spoofkit/linalg.hpp"

namespace spoofkit {

// minimize c^T x  subject to  A x >= b,  x >= 0.
struct LpProblem {
    Vec c;
    Mat a;
    Vec b;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Vec x;
    double objective = 0.0;
    std::uint64_t iterations = 0;
};

// Two-phase dense simplex. Entering variable by Bland's rule (lowest index
// with negative reduced cost); ratio-test ties broken by lowest row index, so
// identical inputs give identical solutions. Throws LpStalledError when the
// combined pivot count exceeds 1e6.
LpSolution solve_lp(const LpProblem& problem);

} // namespace spoofkit
