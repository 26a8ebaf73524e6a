#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "spoofkit/errors.hpp"
#include "spoofkit/lp.hpp"

using namespace spoofkit;

namespace {

LpProblem make(const Vec& c, const Mat& a, const Vec& b) { return LpProblem{c, a, b}; }

bool feasible(const LpProblem& p, const Vec& x, double tol) {
    for (std::size_t i = 0; i < p.b.dim(); ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < x.dim(); ++j) lhs += p.a.at(i, j) * x[j];
        if (lhs < p.b[i] - tol) return false;
    }
    for (std::size_t j = 0; j < x.dim(); ++j)
        if (x[j] < -tol) return false;
    return true;
}

} // namespace

TEST_CASE("single-constraint design problem puts all mass on the best column") {
    Mat a(1, 2);
    a.at(0, 0) = 0.272727;
    a.at(0, 1) = 0.636364;
    const LpProblem p = make(Vec{1.0, 1.0}, a, Vec{2.0});
    const LpSolution sol = solve_lp(p);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.x[0] == 0.0);
    CHECK(sol.x[1] == doctest::Approx(2.0 / 0.636364).epsilon(1e-9));
    CHECK(sol.objective == doctest::Approx(3.142857).epsilon(1e-4));
    CHECK(feasible(p, sol.x, 1e-9));
}

TEST_CASE("two active constraints meet at the vertex") {
    const Mat a = Mat::from_rows(2, 2, {1.0, 2.0, 3.0, 1.0});
    const LpProblem p = make(Vec{1.0, 1.0}, a, Vec{4.0, 6.0});
    const LpSolution sol = solve_lp(p);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.x[0] == doctest::Approx(1.6).epsilon(1e-9));
    CHECK(sol.x[1] == doctest::Approx(1.2).epsilon(1e-9));
    CHECK(sol.objective == doctest::Approx(2.8).epsilon(1e-9));
}

TEST_CASE("infeasible systems are classified") {
    // 0 x >= 1 can never hold.
    CHECK(solve_lp(make(Vec{1.0}, Mat::zeros(1, 1), Vec{1.0})).status == LpStatus::infeasible);
    // x >= 2 together with -x >= -1 (x <= 1).
    Mat a(2, 1);
    a.at(0, 0) = 1.0;
    a.at(1, 0) = -1.0;
    CHECK(solve_lp(make(Vec{1.0}, a, Vec{2.0, -1.0})).status == LpStatus::infeasible);
}

TEST_CASE("unbounded objectives are classified") {
    Mat a(1, 1);
    a.at(0, 0) = 1.0;
    CHECK(solve_lp(make(Vec{-1.0}, a, Vec{0.0})).status == LpStatus::unbounded);

    // Second variable has negative cost and nothing bounding it.
    Mat a2(1, 2);
    a2.at(0, 0) = 1.0;
    CHECK(solve_lp(make(Vec{1.0, -1.0}, a2, Vec{1.0})).status == LpStatus::unbounded);
}

TEST_CASE("trivial and degenerate cases") {
    // Zero requirement: the origin is optimal.
    Mat a(1, 2);
    a.at(0, 0) = 1.0;
    a.at(0, 1) = 1.0;
    LpSolution sol = solve_lp(make(Vec{1.0, 1.0}, a, Vec{0.0}));
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == 0.0);

    // Five copies of one constraint: redundancy must not break termination.
    Mat dup(5, 2);
    for (std::size_t i = 0; i < 5; ++i) {
        dup.at(i, 0) = 1.0;
        dup.at(i, 1) = 1.0;
    }
    sol = solve_lp(make(Vec{1.0, 2.0}, dup, Vec{1.0, 1.0, 1.0, 1.0, 1.0}));
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sol.x[1] == 0.0);

    // Negative rhs rows start from a basic surplus, no artificial needed.
    Mat neg(1, 1);
    neg.at(0, 0) = -1.0;
    sol = solve_lp(make(Vec{1.0}, neg, Vec{-5.0})); // x <= 5
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.objective == 0.0);
}

TEST_CASE("random positive problems: solution is feasible and beats a lattice search") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> coeff(0.1, 2.0);
    std::uniform_real_distribution<double> rhs(0.5, 3.0);
    for (int rep = 0; rep < 25; ++rep) {
        Mat a(3, 2);
        for (double& x : a.e) x = coeff(rng);
        const Vec b{rhs(rng), rhs(rng), rhs(rng)};
        const Vec c{coeff(rng), coeff(rng)};
        const LpProblem p = make(c, a, b);
        const LpSolution sol = solve_lp(p);
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(feasible(p, sol.x, 1e-8));

        // No lattice point may do better than the claimed optimum.
        const double hi = 40.0;
        double best = std::numeric_limits<double>::infinity();
        for (double x0 = 0.0; x0 <= hi; x0 += 0.25) {
            for (double x1 = 0.0; x1 <= hi; x1 += 0.25) {
                if (!feasible(p, Vec{x0, x1}, 0.0)) continue;
                best = std::min(best, c[0] * x0 + c[1] * x1);
            }
        }
        CHECK(best >= sol.objective - 1e-9);
    }
}

TEST_CASE("identical problems give bitwise identical solutions") {
    Mat a(2, 3);
    a.e = {0.3, 1.1, 0.7, 0.9, 0.2, 1.4};
    const LpProblem p = make(Vec{1.0, 1.3, 0.8}, a, Vec{2.0, 1.5});
    const LpSolution s1 = solve_lp(p);
    const LpSolution s2 = solve_lp(p);
    REQUIRE(s1.status == LpStatus::optimal);
    CHECK(s1.x == s2.x);
    CHECK(s1.objective == s2.objective);
    CHECK(s1.iterations == s2.iterations);
}

TEST_CASE("shape mismatches are rejected") {
    CHECK_THROWS_AS(solve_lp(make(Vec{1.0, 1.0}, Mat::zeros(1, 1), Vec{1.0})), DimensionError);
    CHECK_THROWS_AS(solve_lp(make(Vec{1.0}, Mat::zeros(2, 1), Vec{1.0})), DimensionError);
}
