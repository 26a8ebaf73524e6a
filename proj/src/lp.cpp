#include "spoofkit/lp.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spoofkit/errors.hpp"

namespace spoofkit {

namespace {

constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotEntryTol = 1e-9;
constexpr double kPhase1FeasTol = 1e-7;
constexpr std::uint64_t kMaxIterations = 1000000;

// Tableau rows are constraints; `cost` is the eliminated objective row.
struct Tableau {
    std::size_t ncols = 0;               // variable columns, rhs excluded
    std::vector<std::vector<double>> rows; // each ncols + 1 wide, rhs last
    std::vector<double> cost;            // ncols + 1 wide, rhs = -objective
    std::vector<std::size_t> basis;      // basic column per row
};

void pivot(Tableau& t, std::size_t prow, std::size_t pcol) {
    auto& pr = t.rows[prow];
    const double p = pr[pcol];
    for (double& v : pr) v /= p;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (i == prow) continue;
        auto& r = t.rows[i];
        const double f = r[pcol];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j <= t.ncols; ++j) r[j] -= f * pr[j];
    }
    const double fc = t.cost[pcol];
    if (fc != 0.0)
        for (std::size_t j = 0; j <= t.ncols; ++j) t.cost[j] -= fc * pr[j];
    t.basis[prow] = pcol;
}

// Runs Bland pivots until optimal (returns true) or unbounded (returns false).
// `allowed` masks columns that may enter.
bool run_simplex(Tableau& t, const std::vector<bool>& allowed, std::uint64_t& iterations) {
    for (;;) {
        std::size_t enter = t.ncols;
        for (std::size_t j = 0; j < t.ncols; ++j) {
            if (!allowed[j]) continue;
            if (t.cost[j] < -kReducedCostTol) {
                enter = j;
                break;
            }
        }
        if (enter == t.ncols) return true;
        std::size_t leave = t.rows.size();
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const double coeff = t.rows[i][enter];
            if (coeff > kPivotEntryTol) {
                const double ratio = t.rows[i][t.ncols] / coeff;
                if (ratio < best_ratio) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave == t.rows.size()) return false;
        if (++iterations > kMaxIterations)
            throw LpStalledError("solve_lp: pivot count exceeded " + std::to_string(kMaxIterations));
        pivot(t, leave, enter);
    }
}

} // namespace

LpSolution solve_lp(const LpProblem& problem) {
    const std::size_t n = problem.c.dim();
    const std::size_t m = problem.b.dim();
    if (problem.a.rows != m || problem.a.cols != n)
        throw DimensionError("solve_lp: A must be " + std::to_string(m) + "x" + std::to_string(n));

    // A x >= b becomes A x - s = b. Rows with b < 0 are negated so the surplus
    // column can start basic; the rest get one artificial variable each.
    std::vector<std::size_t> art_rows;
    for (std::size_t i = 0; i < m; ++i)
        if (problem.b[i] >= 0.0) art_rows.push_back(i);

    Tableau t;
    t.ncols = n + m + art_rows.size();
    t.rows.assign(m, std::vector<double>(t.ncols + 1, 0.0));
    t.basis.assign(m, 0);
    std::size_t next_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = problem.b[i] >= 0.0 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = sign * problem.a.at(i, j);
        t.rows[i][n + i] = -sign; // surplus
        t.rows[i][t.ncols] = sign * problem.b[i];
        if (sign > 0.0) {
            const std::size_t col = n + m + next_art++;
            t.rows[i][col] = 1.0;
            t.basis[i] = col;
        } else {
            t.basis[i] = n + i;
        }
    }

    LpSolution sol;

    // Phase 1: minimize the sum of artificials.
    t.cost.assign(t.ncols + 1, 0.0);
    for (std::size_t j = n + m; j < t.ncols; ++j) t.cost[j] = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        if (t.basis[i] >= n + m)
            for (std::size_t j = 0; j <= t.ncols; ++j) t.cost[j] -= t.rows[i][j];
    std::vector<bool> allowed(t.ncols, true);
    run_simplex(t, allowed, sol.iterations);
    if (-t.cost[t.ncols] > kPhase1FeasTol) {
        sol.status = LpStatus::infeasible;
        return sol;
    }

    // Drive remaining artificials out of the basis; fully redundant rows drop.
    for (std::size_t i = t.rows.size(); i-- > 0;) {
        if (t.basis[i] < n + m) continue;
        std::size_t col = t.ncols;
        for (std::size_t j = 0; j < n + m; ++j)
            if (std::fabs(t.rows[i][j]) > kPivotEntryTol) {
                col = j;
                break;
            }
        if (col < t.ncols) {
            pivot(t, i, col);
        } else {
            t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
            t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }
    for (std::size_t j = n + m; j < t.ncols; ++j) allowed[j] = false;

    // Phase 2: original objective over structural + surplus columns.
    t.cost.assign(t.ncols + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) t.cost[j] = problem.c[j];
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double cb = t.basis[i] < n ? problem.c[t.basis[i]] : 0.0;
        if (cb != 0.0)
            for (std::size_t j = 0; j <= t.ncols; ++j) t.cost[j] -= cb * t.rows[i][j];
    }
    if (!run_simplex(t, allowed, sol.iterations)) {
        sol.status = LpStatus::unbounded;
        return sol;
    }

    sol.status = LpStatus::optimal;
    sol.x = Vec::zeros(n);
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        if (t.basis[i] < n) sol.x[t.basis[i]] = t.rows[i][t.ncols];
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += problem.c[j] * sol.x[j];
    sol.objective = obj;
    return sol;
}

} // namespace spoofkit
