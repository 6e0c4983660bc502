#include "dradp/errors.hpp"
#include "dradp/optim/simplex.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace dradp;
using namespace dradp::optim;

namespace {

/// Checks feasibility, complementary slackness and strong duality of an
/// optimal solution.
void expect_certified(const LinearProgram& lp, const LpSolution& sol) {
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_LE(lp.max_violation(sol.x), 1e-7);
    const VectorXd act = lp.activities(sol.x);
    const double sign = lp.sense() == Sense::maximize ? -1.0 : 1.0;
    double dual_objective = 0.0;
    for (Index i = 0; i < lp.n_rows(); ++i) {
        dual_objective += sol.duals(i) * lp.row(i).rhs;
        // duals of inactive rows vanish
        EXPECT_LE(std::abs(sol.duals(i) * (act(i) - lp.row(i).rhs)), 1e-6);
        // dual sign conditions in minimization terms
        if (lp.row(i).type == RowType::less_equal)
            EXPECT_LE(sign * sol.duals(i), 1e-9);
        if (lp.row(i).type == RowType::greater_equal)
            EXPECT_GE(sign * sol.duals(i), -1e-9);
    }
    for (Index j = 0; j < lp.n_vars(); ++j) {
        const double d = sign * sol.reduced_costs(j);
        dual_objective += sol.reduced_costs(j) * sol.x(j);
        const bool at_lower = std::abs(sol.x(j) - lp.lower()(j)) <= 1e-7;
        const bool at_upper = std::abs(sol.x(j) - lp.upper()(j)) <= 1e-7;
        if (!at_lower && !at_upper)
            EXPECT_NEAR(d, 0.0, 1e-7);
        else if (at_lower && !at_upper)
            EXPECT_GE(d, -1e-7);
        else if (at_upper && !at_lower)
            EXPECT_LE(d, 1e-7);
    }
    EXPECT_NEAR(dual_objective, sol.objective, 1e-6 * (1.0 + std::abs(sol.objective)));
}

} // namespace

TEST(Simplex, SingleVariableMax) {
    LinearProgram lp(0, Sense::maximize);
    const Index x = lp.add_variable(1.0);
    lp.add_row({{x, 1.0}}, RowType::less_equal, 3.0);
    const LpSolution sol = simplex_solve(lp);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_NEAR(sol.x(0), 3.0, 1e-12);
    EXPECT_NEAR(sol.objective, 3.0, 1e-12);
    expect_certified(lp, sol);
}

TEST(Simplex, DetectsInfeasibility) {
    LinearProgram lp(0, Sense::minimize);
    const Index x = lp.add_variable(0.0, -kInfinity, kInfinity);
    lp.add_row({{x, 1.0}}, RowType::greater_equal, 1.0);
    lp.add_row({{x, 1.0}}, RowType::less_equal, 0.0);
    EXPECT_EQ(simplex_solve(lp).status, LpStatus::infeasible);
}

TEST(Simplex, DetectsUnboundedness) {
    LinearProgram lp(0, Sense::maximize);
    const Index x = lp.add_variable(1.0);
    const Index y = lp.add_variable(0.0);
    lp.add_row({{x, 1.0}, {y, -1.0}}, RowType::less_equal, 1.0);
    EXPECT_EQ(simplex_solve(lp).status, LpStatus::unbounded);
}

TEST(Simplex, FreeVariablesAndEqualities) {
    // min x + 2y  s.t.  x + y = 1, x - y >= -3, both free
    LinearProgram lp(0, Sense::minimize);
    const Index x = lp.add_variable(1.0, -kInfinity, kInfinity);
    const Index y = lp.add_variable(2.0, -kInfinity, kInfinity);
    lp.add_row({{x, 1.0}, {y, 1.0}}, RowType::equal, 1.0);
    lp.add_row({{x, 1.0}, {y, -1.0}}, RowType::greater_equal, -3.0);
    // objective 1 + y, and the rows only force y <= 2
    const LpSolution sol = simplex_solve(lp);
    EXPECT_EQ(sol.status, LpStatus::unbounded);

    lp.set_cost(y, -1.0);
    // objective 1 - 2y is minimized at y = 2, x = -1
    const LpSolution bounded = simplex_solve(lp);
    ASSERT_EQ(bounded.status, LpStatus::optimal);
    EXPECT_NEAR(bounded.x(x), -1.0, 1e-9);
    EXPECT_NEAR(bounded.x(y), 2.0, 1e-9);
    expect_certified(lp, bounded);
}

TEST(Simplex, EmptyRowSet) {
    LinearProgram lp(0, Sense::maximize);
    lp.add_variable(2.0, 0.0, 4.0);
    lp.add_variable(-1.0, -1.0, 3.0);
    const LpSolution sol = simplex_solve(lp);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_NEAR(sol.objective, 9.0, 1e-12);
}

TEST(Simplex, MatchesVertexEnumeration) {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const LinearProgram lp = oracle::random_bounded_lp(rng, 6, 8);
        const auto oracle = oracle::vertex_enumeration(lp);
        ASSERT_TRUE(oracle.has_value());
        const LpSolution sol = simplex_solve(lp);
        ASSERT_EQ(sol.status, LpStatus::optimal) << "trial " << trial;
        EXPECT_NEAR(sol.objective, *oracle, 1e-8) << "trial " << trial;
        expect_certified(lp, sol);
    }
}

TEST(Simplex, WarmStartAfterBoundChange) {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        LinearProgram lp = oracle::random_bounded_lp(rng, 6, 8);
        const LpSolution first = simplex_solve(lp);
        ASSERT_EQ(first.status, LpStatus::optimal);
        const Index j = static_cast<Index>(rng.index(static_cast<std::uint64_t>(lp.n_vars())));
        const double mid = 0.5 * (lp.lower()(j) + lp.upper()(j));
        if (rng.uniform() < 0.5)
            lp.set_bounds(j, lp.lower()(j), mid);
        else
            lp.set_bounds(j, mid, lp.upper()(j));
        SimplexOptions opt;
        opt.warm_start = &first.basis;
        const LpSolution warm = simplex_solve(lp, opt);
        const LpSolution cold = simplex_solve(lp);
        ASSERT_EQ(warm.status, cold.status);
        if (cold.status == LpStatus::optimal)
            EXPECT_NEAR(warm.objective, cold.objective, 1e-8);
    }
}

TEST(Simplex, DeterministicResults) {
    Rng rng(7);
    const LinearProgram lp = oracle::random_bounded_lp(rng, 6, 8);
    const LpSolution a = simplex_solve(lp);
    const LpSolution b = simplex_solve(lp);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Simplex, WorkLimitStopsEarly) {
    Rng rng(8);
    const LinearProgram lp = oracle::random_bounded_lp(rng, 6, 8);
    WorkBudget budget(0.0);
    SimplexOptions opt;
    opt.budget = &budget;
    EXPECT_EQ(simplex_solve(lp, opt).status, LpStatus::work_limit);
}

TEST(Simplex, DegenerateProblemTerminates) {
    // Highly degenerate: many redundant constraints through the optimum.
    LinearProgram lp(0, Sense::maximize);
    const Index n = 6;
    for (Index j = 0; j < n; ++j)
        lp.add_variable(1.0);
    for (Index i = 0; i < 30; ++i) {
        std::vector<std::pair<Index, double>> terms;
        for (Index j = 0; j < n; ++j)
            terms.emplace_back(j, 1.0 + static_cast<double>((i * 7 + j * 3) % 5 == 0));
        lp.add_row(terms, RowType::less_equal, 0.0);
    }
    const LpSolution sol = simplex_solve(lp);
    ASSERT_EQ(sol.status, LpStatus::optimal);
    EXPECT_NEAR(sol.objective, 0.0, 1e-12);
}

TEST(LinearProgram, ValidationAndDump) {
    LinearProgram lp(1);
    lp.add_row({{3, 1.0}}, RowType::less_equal, 1.0);
    EXPECT_THROW(lp.validate(), std::invalid_argument);
    LinearProgram crossed(1);
    crossed.set_bounds(0, 1.0, 0.0);
    EXPECT_THROW(simplex_solve(crossed), std::invalid_argument);

    LinearProgram ok(0, Sense::maximize);
    ok.add_variable(1.0, 0.0, 2.0);
    ok.add_row({{0, 1.0}}, RowType::less_equal, 1.5);
    std::ostringstream os;
    write_lp(os, ok);
    EXPECT_NE(os.str().find("maximize"), std::string::npos);
    EXPECT_NE(os.str().find("r0:"), std::string::npos);
}
